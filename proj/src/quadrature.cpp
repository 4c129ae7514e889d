// SPDX-License-Identifier: MIT
#include "mbrh/quadrature.hpp"

#include <algorithm>
#include <boost/math/special_functions/beta.hpp>
#include <cmath>
#include <map>
#include <mutex>

#include "mbrh/common.hpp"

namespace mbrh {

namespace {

GaussRule build_rule(int n) {
  GaussRule r;
  r.x.resize(n);
  r.w.resize(n);
  r.onepx.resize(n);
  r.onemx.resize(n);
  r.bary.resize(n);
  using ld = long double;
  const ld pi = 3.141592653589793238462643383279502884L;
  for (int i = 0; i < n; ++i) {
    // Root i (descending from +1), then stored ascending.
    ld x = std::cos(pi * (i + 0.75L) / (n + 0.5L));
    ld dp = 0;
    for (int it = 0; it < 100; ++it) {
      ld p0 = 1, p1 = x;
      for (int k = 2; k <= n; ++k) {
        ld p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) {
        p1 = x;
        p0 = 1;
      }
      dp = n * (x * p1 - p0) / (x * x - 1);
      ld dx = p1 / dp;
      x -= dx;
      if (std::fabs(dx) < 1e-19L) break;
    }
    {
      ld p0 = 1, p1 = x;
      for (int k = 2; k <= n; ++k) {
        ld p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1, p1 = x;
      dp = n * (x * p1 - p0) / (x * x - 1);
    }
    const ld w = 2 / ((1 - x * x) * dp * dp);
    const int j = n - 1 - i;
    r.x[j] = static_cast<double>(x);
    r.w[j] = static_cast<double>(w);
    r.onepx[j] = static_cast<double>(1 + x);
    r.onemx[j] = static_cast<double>(1 - x);
  }
  for (int j = 0; j < n; ++j) {
    const double s = std::sqrt(r.onepx[j] * r.onemx[j] * r.w[j]);
    r.bary[j] = (j % 2 == 0) ? s : -s;
  }
  return r;
}

}  // namespace

const GaussRule& gauss_legendre(int n) {
  if (n < 1) throw PreconditionError("gauss_legendre: n must be >= 1");
  static std::mutex mtx;
  static std::map<int, std::unique_ptr<GaussRule>> cache;
  std::lock_guard<std::mutex> lock(mtx);
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<GaussRule>(build_rule(n));
  return *slot;
}

std::vector<double> differentiation_matrix(const GaussRule& rule) {
  const int n = rule.size();
  std::vector<double> d(static_cast<size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i) {
    double diag = 0;
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      const double v = (rule.bary[j] / rule.bary[i]) / (rule.x[i] - rule.x[j]);
      d[static_cast<size_t>(i) * n + j] = v;
      diag -= v;
    }
    d[static_cast<size_t>(i) * n + i] = diag;
  }
  return d;
}

std::vector<double> lagrange_weights(const GaussRule& rule, double t) {
  const int n = rule.size();
  std::vector<double> l(n, 0.0);
  for (int j = 0; j < n; ++j) {
    if (t == rule.x[j]) {
      l[j] = 1.0;
      return l;
    }
  }
  double den = 0;
  for (int j = 0; j < n; ++j) {
    l[j] = rule.bary[j] / (t - rule.x[j]);
    den += l[j];
  }
  for (auto& v : l) v /= den;
  return l;
}

void affine_rule(const GaussRule& rule, double a, double b, std::vector<double>& x,
                 std::vector<double>& w) {
  const int n = rule.size();
  x.resize(n);
  w.resize(n);
  const double h = 0.5 * (b - a);
  for (int j = 0; j < n; ++j) {
    x[j] = (rule.x[j] <= 0) ? a + h * rule.onepx[j] : b - h * rule.onemx[j];
    w[j] = h * rule.w[j];
  }
}

namespace {

// Regularized incomplete beta I_x(e, e) for x <= 1/2 and its derivative.
// Integer exponents use the binomial sum, whose terms are all positive here.
inline bool small_integer(double e) { return e >= 1 && e <= 16 && e == std::floor(e); }

inline double beta_cdf(double e, double x) {
  if (!small_integer(e)) return boost::math::ibeta(e, e, x);
  const int m = static_cast<int>(e), n = 2 * m - 1;
  const double y = 1 - x;
  double c = 1, s = 0;  // c = binom(n, j)
  for (int j = n; j >= m; --j) {
    s += c * std::pow(x, j) * std::pow(y, n - j);
    c = c * j / (n - j + 1);
  }
  return s;
}

inline double beta_pdf(double e, double x) {
  if (!small_integer(e)) return boost::math::ibeta_derivative(e, e, x);
  const int m = static_cast<int>(e);
  double inv_b = 1;  // (2m-1)! / ((m-1)!)^2
  for (int k = 1; k <= m - 1; ++k) inv_b = inv_b * (m - 1 + k) / k;
  inv_b *= 2 * m - 1;
  return inv_b * std::pow(x * (1 - x), m - 1);
}

// Mass of the density on [x, 1/2] given d = 1/2 - x, for integer exponents.
// The integrand is a polynomial, so a Gauss rule of matching size is exact.
inline double beta_mass_to_half(double e, double x, double d) {
  const GaussRule& g = gauss_legendre(static_cast<int>(e) + 1);
  double s = 0;
  for (int i = 0; i < g.size(); ++i) s += g.w[i] * beta_pdf(e, x + 0.5 * d * g.onepx[i]);
  return 0.5 * d * s;
}

}  // namespace

// u(tau) = 2 I_{(1+tau)/2}(e, e) - 1: du/dtau is proportional to
// (1 - tau^2)^(e-1), a polynomial for integer e, so Gauss rules integrate the
// Jacobian exactly once n >= e.
GradedPoint grade(Grading g, double e, double tau, double onep, double onem) {
  GradedPoint r{};
  switch (g) {
    case Grading::None:
      r.u = tau;
      r.p = onep;
      r.q = onem;
      r.dudtau = 1.0;
      break;
    case Grading::Both: {
      const double x = 0.5 * onep, xm = 0.5 * onem;
      if (x <= 0.5) {
        r.p = 2 * beta_cdf(e, x);
        r.q = 2 - r.p;
        r.u = r.p - 1;
      } else {
        r.q = 2 * beta_cdf(e, xm);
        r.p = 2 - r.q;
        r.u = 1 - r.q;
      }
      r.dudtau = beta_pdf(e, x <= 0.5 ? x : xm);
      break;
    }
    case Grading::Start: {
      const double x = 0.25 * onep;
      if (x <= 0.25 || !small_integer(e)) {
        r.p = 4 * beta_cdf(e, x);
        r.q = 2 - r.p;
      } else {
        r.q = 4 * beta_mass_to_half(e, x, 0.25 * onem);
        r.p = 2 - r.q;
      }
      r.u = r.p - 1;
      r.dudtau = beta_pdf(e, x);
      break;
    }
    case Grading::End: {
      const double x = 0.25 * onem;
      if (x <= 0.25 || !small_integer(e)) {
        r.q = 4 * beta_cdf(e, x);
        r.p = 2 - r.q;
      } else {
        r.p = 4 * beta_mass_to_half(e, x, 0.25 * onep);
        r.q = 2 - r.p;
      }
      r.u = 1 - r.q;
      r.dudtau = beta_pdf(e, x);
      break;
    }
  }
  return r;
}

UngradedPoint ungrade_local(Grading g, double e, double p, double q) {
  UngradedPoint r{};
  auto inv = [&](double y) { return boost::math::ibeta_inv(e, e, std::clamp(y, 0.0, 1.0)); };
  switch (g) {
    case Grading::None:
      r.onep = p;
      r.onem = q;
      break;
    case Grading::Both:
      if (p <= 1) {
        r.onep = 2 * inv(0.5 * p);
        r.onem = 2 - r.onep;
      } else {
        r.onem = 2 * inv(0.5 * q);
        r.onep = 2 - r.onem;
      }
      break;
    case Grading::Start:
      r.onep = 4 * inv(0.25 * p);
      r.onem = 2 - r.onep;
      break;
    case Grading::End:
      r.onem = 4 * inv(0.25 * q);
      r.onep = 2 - r.onem;
      break;
  }
  r.tau = r.onep <= 1 ? r.onep - 1 : 1 - r.onem;
  return r;
}

double ungrade(Grading g, double e, double u) {
  if (u <= -1) return -1;
  if (u >= 1) return 1;
  return ungrade_local(g, e, 1 + u, 1 - u).tau;
}

}  // namespace mbrh
