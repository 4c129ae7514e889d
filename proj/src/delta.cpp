// SPDX-License-Identifier: MIT
#include "mbrh/delta.hpp"

#include <cmath>
#include <sstream>

#include "mbrh/quadrature.hpp"

namespace mbrh {

double DeltaFunction::log_jump(double s) const {
  // r is purely imaginary on R, so 1 - r^2 = 1 + |r|^2.
  const cplx r = sd_.r(at(cplx(s, 0.0)));
  return std::log1p(std::norm(r));
}

DeltaFunction::DeltaFunction(const ScatteringData& sd, double lambda1, double lambda2, int nodes)
    : sd_(sd), l1_(lambda1), l2_(lambda2) {
  if (!(lambda1 < sd.re_e() && sd.re_e() < lambda2))
    throw PreconditionError("DeltaFunction: need lambda1 < Re E < lambda2");
  if (nodes < 16) throw PreconditionError("DeltaFunction: too few nodes");
  const GaussRule& g = gauss_legendre(nodes);
  auto build = [&](Ray& r, double start, double sign) {
    r.start = start;
    r.scale = std::max(1.0, std::abs(start));
    r.off.resize(nodes);
    r.w.resize(nodes);
    r.f.resize(nodes);
    for (int j = 0; j < nodes; ++j) {
      const GradedPoint gp = grade(Grading::Start, 2.0, g.x[j], g.onepx[j], g.onemx[j]);
      r.off[j] = r.scale * gp.p / gp.q;
      r.w[j] = g.w[j] * gp.dudtau * 2.0 * r.scale / (gp.q * gp.q);
      r.f[j] = log_jump(sign * (start + r.off[j]));
    }
  };
  build(right_, lambda2, 1.0);
  build(left_, -lambda1, -1.0);
}

bool DeltaFunction::on_rays(const LocalPoint& z) const {
  if (z.offset.imag() != 0.0 || z.anchor.imag() != 0.0) return false;
  // Decide in local form: a node just inside a junction may round onto it.
  const double dr = (z.anchor.real() - l2_) + z.offset.real();
  const double dl = (l1_ - z.anchor.real()) - z.offset.real();
  return dr >= 0.0 || dl >= 0.0;
}

cplx DeltaFunction::ray_integral(const Ray& r, bool mirrored, cplx d, Side side) const {
  const double L = r.scale;
  const double ds = std::max(0.0, d.real());
  const double gs = log_jump((mirrored ? -1.0 : 1.0) * (r.start + ds));
  cplx acc = 0;
  for (size_t j = 0; j < r.off.size(); ++j) {
    const double psi = (ds + L) / (r.off[j] + L);
    acc += r.w[j] * (r.f[j] - gs * psi) / (r.off[j] - d);
  }
  if (d.imag() == 0.0 && d.real() > 0) {
    if (side == Side::None) {
      std::ostringstream os;
      os.precision(17);
      os << "DeltaFunction: side required on the rays (offset " << d << " from a ray start)";
      throw PreconditionError(os.str());
    }
    Side s = side;
    if (mirrored) s = (side == Side::Plus) ? Side::Minus : Side::Plus;
    const cplx lg(std::log(L / d.real()), s == Side::Plus ? kPi : -kPi);
    return acc + gs * (ds + L) / (d + L) * lg;
  }
  if (d == 0.0) throw PreconditionError("DeltaFunction: evaluation at a ray endpoint");
  // log(L / (-d)) / (d + L) = log(w) / ((w - 1) L) with w = -d / L; the
  // quotient is removable at d = -L.
  const cplx w = -d / L;
  const cplx ratio = (w == 1.0) ? cplx(1.0) : std::log(w) / (w - 1.0);
  return acc + gs * (ds + L) / L * ratio;
}

cplx DeltaFunction::log_value(const LocalPoint& z, Side side) const {
  if (on_rays(z) && side == Side::None) throw PreconditionError("DeltaFunction: side required on the rays");
  const cplx dr = (z.anchor - l2_) + z.offset;
  const cplx dl = -((z.anchor - l1_) + z.offset);
  const cplx I = ray_integral(right_, false, dr, side) - ray_integral(left_, true, dl, side);
  return I / (2.0 * kPi * kI);
}

}  // namespace mbrh
