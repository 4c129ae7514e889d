// SPDX-License-Identifier: MIT
#include "mbrh/phase.hpp"

#include <boost/math/tools/roots.hpp>
#include <boost/math/tools/toms748_solve.hpp>
#include <cmath>
#include <limits>
#include <sstream>

namespace mbrh {

PhaseField::PhaseField(BroadeningTransform tr, double t, double x) : tr_(std::move(tr)), t_(t), x_(x) {
  if (!std::isfinite(t) || !std::isfinite(x)) throw PreconditionError("PhaseField: non-finite (t, x)");
}

double PhaseField::xi() const {
  const double tau = t_ - x_;
  if (tau <= 0) return std::numeric_limits<double>::infinity();
  return x_ / (4 * tau);
}

cplx PhaseField::theta(const LocalPoint& p, Side side) const {
  if (x_ == 0.0) return p.z() * t_;
  return p.z() * t_ - tr_.eta(p, side) * x_;
}

double PhaseField::re_i_theta(cplx z) const {
  const double nu = z.imag();
  if (nu == 0.0) return 0.0;
  return nu * (x_ - t_ + 0.25 * x_ * tr_.pi_moment(z.real(), nu));
}

int PhaseField::signature(cplx z, double band) const {
  const double v = re_i_theta(z);
  if (std::abs(v) <= band) return 0;
  return v > 0 ? 1 : -1;
}

namespace {

using boost::math::tools::eps_tolerance;

// nu > 0 with Pi(lambda, nu) = 1/xi, or 0 when lambda lies outside.
double solve_nu(const BroadeningTransform& tr, double lambda, double xi) {
  const double target = 1.0 / xi;
  const double top = std::sqrt(xi);
  auto g = [&](double nu) { return tr.pi_moment(lambda, nu) - target; };
  double lo = top * 1e-30;
  double glo = g(lo);
  if (!(glo > 0)) return 0.0;
  double ghi = g(top);
  if (ghi >= 0) {
    if (ghi == 0) return top;
    std::ostringstream os;
    os << "level_line: bracket failure at lambda = " << lambda;
    throw NumericalError(os.str());
  }
  boost::uintmax_t iters = 200;
  auto res = boost::math::tools::toms748_solve(g, lo, top, glo, ghi, eps_tolerance<double>(53), iters);
  return 0.5 * (res.first + res.second);
}

}  // namespace

std::optional<std::pair<double, double>> stationary_points(const BroadeningTransform& tr, double xi) {
  if (!(xi > 0)) throw PreconditionError("stationary_points: xi must be positive");
  const BroadeningProfile& prof = tr.profile();
  if (!prof.compact()) return std::nullopt;
  const double L = prof.support();
  const double rs = std::sqrt(xi);
  auto f = [&](double lam) { return xi * prof.second_moments(lam, 0.0).first - 1.0; };
  auto solve = [&](double a, double b) -> std::optional<double> {
    double fa = f(a), fb = f(b);
    if (fa == 0) return a;
    if (fb == 0) return b;
    if (fa * fb > 0) return std::nullopt;
    boost::uintmax_t iters = 200;
    auto res = boost::math::tools::toms748_solve(f, a, b, fa, fb, eps_tolerance<double>(53), iters);
    const double root = 0.5 * (res.first + res.second);
    // simple root: d/dlambda I1 = 2 int n/(s-l)^3 must not vanish
    const double d = prof.cauchy_d2(cplx(root, 0)).real();
    if (d == 0.0) throw NumericalError("stationary_points: degenerate (non-simple) root");
    return root;
  };
  const double eps = L * 1e-14;
  auto plus = solve(L + eps, L + rs);
  auto minus = solve(-L - rs, -L - eps);
  if (!plus || !minus) return std::nullopt;
  return std::make_pair(*minus, *plus);
}

LevelLine level_line(const BroadeningTransform& tr, double xi, int resolution, double extent) {
  if (!(xi > 0)) throw PreconditionError("level_line: xi must be positive");
  if (resolution < 4) throw PreconditionError("level_line: resolution too small");
  const BroadeningProfile& prof = tr.profile();
  LevelLine out;
  out.closed = prof.compact();
  double lo, hi;
  if (prof.compact()) {
    auto sp = stationary_points(tr, xi);
    if (sp) {
      lo = sp->first;
      hi = sp->second;
    } else {
      lo = -prof.support();
      hi = prof.support();
    }
  } else {
    lo = -extent;
    hi = extent;
  }
  // Chebyshev-clustered trace, then resample by arc length.
  const int m = std::max(4 * resolution, 64);
  std::vector<double> lam(m + 1), nu(m + 1);
  for (int i = 0; i <= m; ++i) {
    const double c = 0.5 * (1 - std::cos(kPi * i / m));
    lam[i] = (i == 0) ? lo : (i == m ? hi : lo + (hi - lo) * c);
    nu[i] = (i == 0 || i == m) && out.closed ? 0.0 : solve_nu(tr, lam[i], xi);
  }
  std::vector<double> arc(m + 1, 0.0);
  for (int i = 1; i <= m; ++i) arc[i] = arc[i - 1] + std::hypot(lam[i] - lam[i - 1], nu[i] - nu[i - 1]);
  const double total = arc[m];
  out.upper.reserve(resolution);
  size_t seg = 0;
  for (int k = 0; k < resolution; ++k) {
    const double s = total * k / (resolution - 1);
    while (seg + 1 < static_cast<size_t>(m) && arc[seg + 1] < s) ++seg;
    double l;
    if (k == 0)
      l = lo;
    else if (k == resolution - 1)
      l = hi;
    else {
      const double ds = arc[seg + 1] - arc[seg];
      const double f = ds > 0 ? (s - arc[seg]) / ds : 0.0;
      l = lam[seg] + f * (lam[seg + 1] - lam[seg]);
    }
    const bool end = (k == 0 || k == resolution - 1) && out.closed;
    const double v = end ? 0.0 : solve_nu(tr, l, xi);
    out.upper.emplace_back(l, v);
  }
  out.lower.reserve(out.upper.size());
  for (const cplx& z : out.upper) out.lower.push_back(std::conj(z));
  return out;
}

}  // namespace mbrh
