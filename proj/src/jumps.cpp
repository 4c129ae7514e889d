// SPDX-License-Identifier: MIT
#include "mbrh/jumps.hpp"

#include <cmath>

namespace mbrh {

JumpGenerator JumpGenerator::original(const ScatteringData& sd, const BroadeningTransform& tr, double t,
                                      double x) {
  JumpGenerator g;
  g.variant_ = JumpVariant::Original;
  g.sd_ = std::make_shared<const ScatteringData>(sd);
  g.phase_ = std::make_shared<const PhaseField>(tr, t, x);
  g.t_ = t;
  g.x_ = x;
  return g;
}

JumpGenerator JumpGenerator::finite(const ScatteringData& sd, const BroadeningTransform& tr, double t, double x,
                                    std::shared_ptr<const DeltaFunction> delta) {
  if (!delta) throw PreconditionError("JumpGenerator::finite: delta function required");
  JumpGenerator g = original(sd, tr, t, x);
  g.variant_ = JumpVariant::Finite;
  g.delta_ = std::move(delta);
  return g;
}

JumpGenerator JumpGenerator::infinite(const ScatteringData& sd, const BroadeningTransform& tr, double t,
                                      double x) {
  JumpGenerator g = original(sd, tr, t, x);
  g.variant_ = JumpVariant::Infinite;
  return g;
}

JumpGenerator JumpGenerator::custom(CustomFn fn) {
  JumpGenerator g;
  g.variant_ = JumpVariant::Custom;
  g.custom_ = std::move(fn);
  return g;
}

cplx JumpGenerator::theta(const LocalPoint& z, Side s) const { return phase_->theta(z, s); }

Mat2 JumpGenerator::real_line(const LocalPoint& z) const {
  if (z.z().imag() != 0.0) throw PreconditionError("jump: point not on R");
  const cplx r = sd_->r(z);
  const cplx tp = theta(z, Side::Plus), tm = theta(z, Side::Minus);
  return mat2(1.0 - r * r * std::exp(2.0 * kI * (tm - tp)), -r * std::exp(-2.0 * kI * tp),
              r * std::exp(2.0 * kI * tm), 1.0);
}

Mat2 JumpGenerator::cut(const LocalPoint& z) const {
  if (!sd_->on_cut(z)) throw PreconditionError("jump: point not on the open cut");
  const double nu = z.z().imag();
  if (nu == 0.0) throw PreconditionError("jump: the cut jump is undefined at Re E");
  const cplx h = sd_->h(z);
  const cplx th = theta(z);
  if (nu > 0) return mat2(1.0, h * std::exp(-2.0 * kI * th), 0.0, 1.0);
  return mat2(1.0, 0.0, h * std::exp(2.0 * kI * th), 1.0);
}

Mat2 JumpGenerator::jump(PieceRole role, const LocalPoint& z) const {
  auto mismatch = [&]() -> Mat2 {
    throw PreconditionError("jump: piece '" + role_name(role) + "' does not belong to this jump variant");
  };
  switch (variant_) {
    case JumpVariant::Custom: return custom_(role, z);
    case JumpVariant::Original:
      if (role == PieceRole::RealLine) return real_line(z);
      if (role == PieceRole::Cut) return cut(z);
      return mismatch();
    case JumpVariant::Finite: {
      const cplx d = delta_->value(z);
      const cplx d2 = d * d;
      switch (role) {
        case PieceRole::Interval: {
          Mat2 J = real_line(z);
          J(0, 1) /= d2;
          J(1, 0) *= d2;
          return J;
        }
        case PieceRole::Cut: {
          Mat2 J = cut(z);
          J(0, 1) /= d2;
          J(1, 0) *= d2;
          return J;
        }
        case PieceRole::L1:
        case PieceRole::L3:
          return mat2(1.0, 0.0, sd_->ab(z) * d2 * std::exp(2.0 * kI * theta(z)), 1.0);
        case PieceRole::L1bar:
        case PieceRole::L3bar:
          return mat2(1.0, -sd_->ab(z) / d2 * std::exp(-2.0 * kI * theta(z)), 0.0, 1.0);
        default: return mismatch();
      }
    }
    case JumpVariant::Infinite:
      switch (role) {
        case PieceRole::L2: return mat2(1.0, -sd_->r(z) * std::exp(-2.0 * kI * theta(z)), 0.0, 1.0);
        case PieceRole::L2bar: return mat2(1.0, 0.0, sd_->r(z) * std::exp(2.0 * kI * theta(z)), 1.0);
        case PieceRole::RealLine:
        case PieceRole::Cut: return Mat2::Identity();
        default: return mismatch();
      }
  }
  return Mat2::Identity();
}

Mat2 JumpGenerator::sector_factor(Sector s, cplx z) const {
  if (s == Sector::Outside) return Mat2::Identity();
  const LocalPoint p = at(z);
  switch (variant_) {
    case JumpVariant::Finite: {
      const cplx d = delta_->value(p);
      const cplx d2 = d * d;
      if (s == Sector::D1 || s == Sector::D3)
        return mat2(1.0, 0.0, sd_->ab(p) * d2 * std::exp(2.0 * kI * theta(p)), 1.0);
      if (s == Sector::D1bar || s == Sector::D3bar)
        return mat2(1.0, sd_->ab(p) / d2 * std::exp(-2.0 * kI * theta(p)), 0.0, 1.0);
      break;
    }
    case JumpVariant::Infinite:
      if (s == Sector::D2) return mat2(1.0, -sd_->r(p) * std::exp(-2.0 * kI * theta(p)), 0.0, 1.0);
      if (s == Sector::D2bar) return mat2(1.0, 0.0, -sd_->r(p) * std::exp(2.0 * kI * theta(p)), 1.0);
      break;
    default: break;
  }
  throw PreconditionError("sector_factor: sector does not match the jump variant");
}

}  // namespace mbrh
