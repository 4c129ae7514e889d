// SPDX-License-Identifier: MIT
#include "mbrh/spectral.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>

namespace mbrh {

PlaneWaveData endpoint_from_boundary(double A0, double omega0, const BroadeningTransform& tr) {
  if (!(A0 > 0) || !(omega0 > 0) || !std::isfinite(A0) || !std::isfinite(omega0))
    throw PreconditionError("endpoint_from_boundary: A0 and omega0 must be positive");
  PlaneWaveData pw;
  pw.A0 = A0;
  pw.omega0 = omega0;
  pw.E = cplx(-0.5 * omega0, 0.5 * A0);
  pw.alpha0 = 0.5 * omega0;
  const double re = pw.E.real(), im = pw.E.imag();
  const BroadeningProfile& prof = tr.profile();
  double integral = 0;
  if (prof.kind() == ProfileKind::Box) {
    const double L = prof.support();
    integral = prof.mass() * (std::asinh((L - re) / im) + std::asinh((L + re) / im)) / (2 * L);
  } else {
    auto f = [&](double s) { return prof.n(s) / std::hypot(s - re, im); };
    using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
    const double L = prof.support();
    const double inf = std::numeric_limits<double>::infinity();
    if (std::isfinite(L)) {
      // split at Re E where the integrand varies fastest
      const double m = std::clamp(re, -L, L);
      integral = GK::integrate(f, -L, m, 20, 1e-15) + GK::integrate(f, m, L, 20, 1e-15);
    } else {
      integral = GK::integrate(f, -inf, re, 20, 1e-15) + GK::integrate(f, re, inf, 20, 1e-15);
    }
  }
  pw.beta0 = re + 0.25 * integral;
  return pw;
}

ScatteringData::ScatteringData(PlaneWaveData pw) : pw_(pw) {
  if (!(pw_.E.imag() > 0)) throw PreconditionError("ScatteringData: Im E must be positive");
}

cplx ScatteringData::shifted(const LocalPoint& p) const {
  return cplx(p.anchor.real() - re_e(), p.anchor.imag()) + p.offset;
}

bool ScatteringData::on_cut(const LocalPoint& p) const {
  const cplx u = shifted(p);
  return u.real() == 0.0 && std::abs(u.imag()) < im_e();
}

namespace {

// b^2 - nu^2 on the cut, using local coordinates at E / conj E.
double cut_radicand(const LocalPoint& p, cplx E, double nu) {
  const double b = E.imag();
  double bm = b - nu, bp = b + nu;
  if (p.anchor == E) bm = -p.offset.imag();
  if (p.anchor == std::conj(E)) bp = p.offset.imag();
  return bm * bp;
}

}  // namespace

cplx ScatteringData::w(const LocalPoint& p, Side side, Branch br) const {
  const double b = im_e();
  const cplx u = shifted(p);
  if (br == Branch::ViaInfinity) {
    if (u.real() == 0.0 && std::abs(u.imag()) >= b)
      throw PreconditionError("w: point on the via-infinity cut");
    return std::sqrt(kI * (u - kI * b)) * std::sqrt(-kI * (u + kI * b));
  }
  if (u.real() == 0.0 && std::abs(u.imag()) <= b) {
    const double rad = cut_radicand(p, pw_.E, u.imag());
    if (rad <= 0.0) throw PreconditionError("w: evaluation at a branch point");
    if (side == Side::None) throw PreconditionError("w: point on the cut requires a side");
    const double v = std::sqrt(rad);
    return side == Side::Plus ? cplx(v, 0) : cplx(-v, 0);
  }
  const cplx ratio = b / u;
  return u * std::sqrt(1.0 + ratio * ratio);
}

cplx ScatteringData::kappa(const LocalPoint& p, Side side, Branch br) const {
  const double b = im_e();
  const cplx u = shifted(p);
  if (br == Branch::ViaInfinity) return std::sqrt((u + kI * b) / w(p, side, br));
  if (u.real() == 0.0 && std::abs(u.imag()) <= b) {
    const double rad = cut_radicand(p, pw_.E, u.imag());
    if (rad <= 0.0) throw PreconditionError("kappa: evaluation at a branch point");
    if (side == Side::None) throw PreconditionError("kappa: point on the cut requires a side");
    // |kappa^4| = (b + nu)/(b - nu)
    double bm = b - u.imag(), bp = b + u.imag();
    if (p.anchor == pw_.E) bm = -p.offset.imag();
    if (p.anchor == std::conj(pw_.E)) bp = p.offset.imag();
    const double mod = std::pow(bp / bm, 0.25);
    const double ph = side == Side::Plus ? kPi / 4 : -kPi / 4;
    return std::polar(mod, ph);
  }
  const cplx k4 = (u + kI * b) / (u - kI * b);
  return std::sqrt(std::sqrt(k4));
}

cplx ScatteringData::a(const LocalPoint& p, Side side) const {
  const cplx k = kappa(p, side);
  return 0.5 * (k + 1.0 / k);
}

cplx ScatteringData::b(const LocalPoint& p, Side side) const {
  const cplx k = kappa(p, side);
  return 0.5 * (k - 1.0 / k);
}

cplx ScatteringData::r(const LocalPoint& p, Side side) const {
  const cplx u = shifted(p);
  return kI * im_e() / (w(p, side) + u);
}

cplx ScatteringData::ab(const LocalPoint& p, Side side) const { return kI * im_e() / (2.0 * w(p, side)); }

cplx ScatteringData::h(const LocalPoint& p) const {
  const cplx u = shifted(p);
  const double rad = u.real() == 0.0 ? cut_radicand(p, pw_.E, u.imag()) : -1.0;
  if (rad < 0.0) throw PreconditionError("h: defined only on the segment [E, conj E]");
  return cplx(0, -2.0 * std::sqrt(rad) / im_e());
}

Mat2 ScatteringData::transition(const LocalPoint& p, Side side) const {
  const cplx aa = a(p, side), bb = b(p, side);
  return mat2(aa, bb, bb, aa);
}

BackgroundTriple ScatteringData::background(double t, double x, double lambda) const {
  const double b = im_e();
  const cplx ph = std::exp(cplx(0, 2 * (pw_.alpha0 * t + pw_.beta0 * x)));
  const double wi = std::hypot(lambda - re_e(), b);
  BackgroundTriple out;
  out.E = 2 * b * ph;
  out.rho = kI * (b / wi) * ph;
  out.N = -(lambda - re_e()) / wi;
  return out;
}

}  // namespace mbrh
