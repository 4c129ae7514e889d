// SPDX-License-Identifier: MIT
#include "mbrh/broadening.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mbrh/quadrature.hpp"

namespace mbrh {
namespace detail {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kMassTol = 1e-8;
constexpr double kEndpointTol = 1e-6;

}  // namespace

// Raw (unscaled) model. The public wrapper multiplies everything by a
// constant factor for scale/normalize requests.
class ProfileModel {
 public:
  virtual ~ProfileModel() = default;
  virtual ProfileKind kind() const = 0;
  virtual double density(double s) const = 0;
  virtual double support() const = 0;
  // C(z) for z off the support; local coordinates are honoured when the
  // anchor is a support endpoint.
  virtual cplx cauchy_raw(const LocalPoint& p) const = 0;
  virtual double pv_raw(const LocalPoint& p) const = 0;
  virtual cplx d1_raw(cplx z) const = 0;
  virtual cplx m3_raw(cplx z) const = 0;
  virtual double pi_raw(double lambda, double nu) const {
    if (nu == 0.0) {
      if (on_support(lambda)) return kInf;
      return d1_raw(cplx(lambda, 0)).real();
    }
    return cauchy_raw(at(cplx(lambda, std::abs(nu)))).imag() / std::abs(nu);
  }
  virtual LambdaGrid grid_raw(int n) const = 0;

  bool on_support(double lambda) const {
    const double L = support();
    return L == kInf || std::abs(lambda) < L;
  }

  double factor = 1.0;
  double mass = 1.0;
  double peak = 0.0;
  double mu = 1.0;
};

// ---------------------------------------------------------------- box
class BoxModel final : public ProfileModel {
 public:
  explicit BoxModel(double L) : L_(L) {}
  ProfileKind kind() const override { return ProfileKind::Box; }
  double density(double s) const override { return std::abs(s) < L_ ? 0.5 / L_ : 0.0; }
  double support() const override { return L_; }

  void ends(const LocalPoint& p, cplx& yb, cplx& ya) const {
    // yb = L - z, ya = -L - z
    if (p.anchor == cplx(L_, 0))
      yb = -p.offset;
    else
      yb = (cplx(L_, 0) - p.anchor) - p.offset;
    if (p.anchor == cplx(-L_, 0))
      ya = -p.offset;
    else
      ya = (cplx(-L_, 0) - p.anchor) - p.offset;
  }
  cplx cauchy_raw(const LocalPoint& p) const override {
    cplx yb, ya;
    ends(p, yb, ya);
    return std::log(yb / ya) / (2 * L_);
  }
  double pv_raw(const LocalPoint& p) const override {
    cplx yb, ya;
    ends(p, yb, ya);
    return std::log(std::abs(yb) / std::abs(ya)) / (2 * L_);
  }
  cplx d1_raw(cplx z) const override { return 1.0 / ((z - L_) * (z + L_)); }
  cplx m3_raw(cplx z) const override {
    return (1.0 / ((L_ + z) * (L_ + z)) - 1.0 / ((L_ - z) * (L_ - z))) / (4 * L_);
  }
  double pi_raw(double lambda, double nu) const override {
    const double an = std::abs(nu);
    if (an == 0.0) {
      if (std::abs(lambda) < L_) return kInf;
      return 1.0 / ((lambda - L_) * (lambda + L_));
    }
    return std::atan2(2 * L_ * an, an * an + (lambda - L_) * (lambda + L_)) / (2 * L_ * an);
  }
  LambdaGrid grid_raw(int n) const override {
    LambdaGrid g;
    affine_rule(gauss_legendre(n), -L_, L_, g.lambda, g.weight);
    g.density.assign(n, 0.5 / L_);
    return g;
  }

 private:
  double L_;
};

// ------------------------------------------ smooth compact (subtraction)
// With an analytic continuation of n the integrand is regularised at z
// itself, which leaves an entire remainder. Without one, a real Taylor
// polynomial about clamp(Re z) is subtracted instead.
class SmoothCompactModel : public ProfileModel {
 public:
  using RealDeriv = std::function<double(double, int)>;
  using ComplexDeriv = std::function<cplx(cplx, int)>;
  SmoothCompactModel(ProfileKind k, double L, RealDeriv nd, ComplexDeriv nz = nullptr)
      : kind_(k), L_(L), nd_(std::move(nd)), nz_(std::move(nz)) {
    affine_rule(gauss_legendre(kNodes), -L_, L_, xs_, ws_);
    for (double x : xs_) ns_.push_back(nd_(x, 0));
  }
  ProfileKind kind() const override { return kind_; }
  double density(double s) const override { return std::abs(s) <= L_ ? nd_(s, 0) : 0.0; }
  double support() const override { return L_; }

  // int_{-L}^{L} n(s)/(s - z)^{k+1} ds; pv selects the principal value
  // (z real on the support, k == 0).
  cplx moment(const LocalPoint& p, int k, bool pv) const {
    const cplx z = p.z();
    if (distance(z) > 0.5 * L_ && !pv) {
      cplx acc = 0;
      for (size_t j = 0; j < xs_.size(); ++j) acc += ws_[j] * ns_[j] / std::pow(cplx(xs_[j]) - z, k + 1);
      return acc;
    }
    cplx yb = (p.anchor == cplx(L_, 0)) ? -p.offset : (cplx(L_, 0) - p.anchor) - p.offset;
    cplx ya = (p.anchor == cplx(-L_, 0)) ? -p.offset : (cplx(-L_, 0) - p.anchor) - p.offset;
    auto power_integral = [&](int e) -> cplx {
      if (e == -1) return pv ? cplx(std::log(std::abs(yb) / std::abs(ya)), 0) : std::log(yb / ya);
      return (std::pow(yb, e + 1) - std::pow(ya, e + 1)) / double(e + 1);
    };
    cplx out;
    if (nz_) {
      // expansion about z: degree k
      cplx coef[3];
      double fact = 1;
      for (int q = 0; q <= k; ++q) {
        if (q > 0) fact *= q;
        coef[q] = nz_(z, q) / fact;
      }
      cplx exact = 0;
      for (int q = 0; q <= k; ++q)
        if (coef[q] != 0.0) exact += coef[q] * power_integral(q - k - 1);
      cplx acc = 0;
      for (size_t j = 0; j < xs_.size(); ++j) {
        const cplx d = cplx(xs_[j]) - z;
        if (d == 0.0) continue;
        cplx taylor = 0, dp = 1;
        for (int q = 0; q <= k; ++q) {
          taylor += coef[q] * dp;
          dp *= d;
        }
        acc += ws_[j] * (ns_[j] - taylor) / std::pow(d, k + 1);
      }
      out = acc + exact;
    } else {
      const double ls = std::clamp(z.real(), -L_, L_);
      const int m = k + 1;
      double coef[4];
      double fact = 1;
      for (int q = 0; q <= m; ++q) {
        if (q > 0) fact *= q;
        coef[q] = nd_(ls, q) / fact;
      }
      const cplx c = (p.anchor == cplx(ls, 0)) ? p.offset : z - ls;
      cplx exact = 0;
      for (int q = 0; q <= m; ++q) {
        if (coef[q] == 0.0) continue;
        double binom = 1;
        for (int pp = 0; pp <= q; ++pp) {
          if (pp > 0) binom = binom * (q - pp + 1) / pp;
          if (q - pp > 0 && c == 0.0) continue;
          const cplx cpow = (q - pp == 0) ? cplx(1) : std::pow(c, q - pp);
          exact += coef[q] * binom * cpow * power_integral(pp - k - 1);
        }
      }
      cplx acc = 0;
      for (size_t j = 0; j < xs_.size(); ++j) {
        const double d = xs_[j] - ls;
        double taylor = 0, dp = 1;
        for (int q = 0; q <= m; ++q) {
          taylor += coef[q] * dp;
          dp *= d;
        }
        const cplx den = std::pow(cplx(xs_[j]) - z, k + 1);
        if (den == 0.0) continue;
        acc += ws_[j] * (ns_[j] - taylor) / den;
      }
      out = acc + exact;
    }
    if (pv) out = cplx(out.real(), 0);
    return out;
  }

  double distance(cplx z) const {
    const double dx = std::max(0.0, std::abs(z.real()) - L_);
    return std::hypot(dx, z.imag());
  }

  cplx cauchy_raw(const LocalPoint& p) const override { return moment(p, 0, false); }
  double pv_raw(const LocalPoint& p) const override { return moment(p, 0, true).real(); }
  cplx d1_raw(cplx z) const override { return moment(at(z), 1, false); }
  cplx m3_raw(cplx z) const override { return moment(at(z), 2, false); }
  LambdaGrid grid_raw(int n) const override {
    LambdaGrid g;
    affine_rule(gauss_legendre(n), -L_, L_, g.lambda, g.weight);
    g.density.resize(n);
    for (int j = 0; j < n; ++j) g.density[j] = nd_(g.lambda[j], 0);
    return g;
  }

 private:
  static constexpr int kNodes = 128;
  ProfileKind kind_;
  double L_;
  RealDeriv nd_;
  ComplexDeriv nz_;
  std::vector<double> xs_, ws_, ns_;
};

// ------------------------------------------------------------ table
class TableModel final : public ProfileModel {
 public:
  TableModel(std::vector<double> x, std::vector<double> y) : x_(std::move(x)), y_(std::move(y)) {
    const size_t M = x_.size();
    slope_.resize(M - 1);
    for (size_t j = 0; j + 1 < M; ++j) slope_[j] = (y_[j + 1] - y_[j]) / (x_[j + 1] - x_[j]);
    d_.resize(M);
    for (size_t j = 0; j < M; ++j) {
      const double prev = j == 0 ? 0.0 : slope_[j - 1];
      const double next = j + 1 < M ? slope_[j] : 0.0;
      d_[j] = prev - next;
    }
    L_ = std::max(std::abs(x_.front()), std::abs(x_.back()));
  }
  ProfileKind kind() const override { return ProfileKind::Table; }
  double density(double s) const override {
    if (s <= x_.front() || s >= x_.back()) return 0.0;
    const size_t j = std::upper_bound(x_.begin(), x_.end(), s) - x_.begin() - 1;
    return y_[j] + slope_[j] * (s - x_[j]);
  }
  double support() const override { return L_; }

  bool far(cplx z) const { return std::abs(z) > 4 * L_; }

  cplx quad(cplx z, int k) const {
    const GaussRule& r = gauss_legendre(12);
    cplx acc = 0;
    std::vector<double> xs, ws;
    for (size_t j = 0; j + 1 < x_.size(); ++j) {
      affine_rule(r, x_[j], x_[j + 1], xs, ws);
      for (int i = 0; i < r.size(); ++i)
        acc += ws[i] * (y_[j] + slope_[j] * (xs[i] - x_[j])) / std::pow(cplx(xs[i]) - z, k + 1);
    }
    return acc;
  }
  cplx diff(const LocalPoint& p, size_t j) const {
    // lambda_j - z
    if (p.anchor == cplx(x_[j], 0)) return -p.offset;
    return (cplx(x_[j], 0) - p.anchor) - p.offset;
  }
  cplx cauchy_raw(const LocalPoint& p) const override {
    if (far(p.z())) return quad(p.z(), 0);
    cplx acc = 0;
    for (size_t j = 0; j < x_.size(); ++j) {
      if (d_[j] == 0.0) continue;
      const cplx y = diff(p, j);
      if (y == 0.0) continue;
      acc += d_[j] * (-y) * std::log(y);
    }
    return acc;
  }
  double pv_raw(const LocalPoint& p) const override {
    double acc = 0;
    for (size_t j = 0; j < x_.size(); ++j) {
      if (d_[j] == 0.0) continue;
      const double y = diff(p, j).real();
      if (y == 0.0) continue;
      acc += d_[j] * (-y) * std::log(std::abs(y));
    }
    return acc;
  }
  cplx d1_raw(cplx z) const override {
    if (far(z)) return quad(z, 1);
    cplx acc = 0;
    for (size_t j = 0; j < x_.size(); ++j)
      if (d_[j] != 0.0) acc += d_[j] * std::log(cplx(x_[j]) - z);
    return acc;
  }
  cplx m3_raw(cplx z) const override {
    if (far(z)) return quad(z, 2);
    cplx acc = 0;
    for (size_t j = 0; j < x_.size(); ++j)
      if (d_[j] != 0.0) acc += d_[j] / (z - x_[j]);
    return 0.5 * acc;
  }
  LambdaGrid grid_raw(int n) const override {
    const int intervals = static_cast<int>(x_.size()) - 1;
    const int per = std::max(2, (n + intervals - 1) / intervals);
    const GaussRule& r = gauss_legendre(per);
    LambdaGrid g;
    std::vector<double> xs, ws;
    for (int j = 0; j < intervals; ++j) {
      affine_rule(r, x_[j], x_[j + 1], xs, ws);
      for (int i = 0; i < per; ++i) {
        g.lambda.push_back(xs[i]);
        g.weight.push_back(ws[i]);
        g.density.push_back(y_[j] + slope_[j] * (xs[i] - x_[j]));
      }
    }
    return g;
  }

 private:
  std::vector<double> x_, y_, slope_, d_;
  double L_;
};

// ---------------------------------------------------------- lorentzian
class LorentzianModel final : public ProfileModel {
 public:
  explicit LorentzianModel(double g) : g_(g) {}
  ProfileKind kind() const override { return ProfileKind::Lorentzian; }
  double density(double s) const override { return g_ / (kPi * (s * s + g_ * g_)); }
  double support() const override { return kInf; }
  cplx shift(cplx z) const { return z.imag() >= 0 ? z + kI * g_ : z - kI * g_; }
  cplx cauchy_raw(const LocalPoint& p) const override { return -1.0 / shift(p.z()); }
  double pv_raw(const LocalPoint& p) const override {
    const double l = p.z().real();
    return -l / (l * l + g_ * g_);
  }
  cplx d1_raw(cplx z) const override {
    const cplx s = shift(z);
    return 1.0 / (s * s);
  }
  cplx m3_raw(cplx z) const override {
    const cplx s = shift(z);
    return -1.0 / (s * s * s);
  }
  double pi_raw(double lambda, double nu) const override {
    const double an = std::abs(nu);
    if (an == 0.0) return kInf;
    const double h = an + g_;
    return h / (an * (lambda * lambda + h * h));
  }
  LambdaGrid grid_raw(int n) const override {
    LambdaGrid g;
    const GaussRule& r = gauss_legendre(n);
    for (int j = 0; j < n; ++j) {
      const double a = 0.5 * kPi * r.x[j];
      const double c = std::cos(a);
      g.lambda.push_back(g_ * std::tan(a));
      g.weight.push_back(g_ * 0.5 * kPi * r.w[j] / (c * c));
      g.density.push_back(density(g.lambda.back()));
    }
    return g;
  }

 private:
  double g_;
};

// --------------------------------------------------- unbounded callable
class UnboundedModel final : public ProfileModel {
 public:
  UnboundedModel(double g, std::function<double(double)> f) : g_(g), f_(std::move(f)) {
    const GaussRule& r = gauss_legendre(kNodes);
    for (int j = 0; j < kNodes; ++j) {
      const double a = 0.5 * kPi * r.x[j];
      const double c = std::cos(a);
      s_.push_back(g_ * std::tan(a));
      w_.push_back(g_ * 0.5 * kPi * r.w[j] / (c * c));
      n_.push_back(f_(s_.back()));
    }
  }
  ProfileKind kind() const override { return ProfileKind::UnboundedCallable; }
  double density(double s) const override { return f_(s); }
  double support() const override { return kInf; }

  cplx transform(cplx z, bool pv_mode) const {
    // Lorentzian-shaped subtraction centred at Re z.
    const double ls = z.real();
    const double ns = f_(ls);
    cplx exact;
    const double sgn = (z.imag() >= 0) ? 1.0 : -1.0;
    if (pv_mode)
      exact = 0.0;  // p.v. of the symmetric bump about ls vanishes
    else
      exact = ns * kPi * g_ * (-1.0 / (z - ls + sgn * kI * g_));
    cplx acc = 0;
    for (size_t j = 0; j < s_.size(); ++j) {
      const double d = s_[j] - ls;
      const double phi = ns * g_ * g_ / (d * d + g_ * g_);
      const cplx den = cplx(s_[j]) - z;
      if (den == 0.0) continue;
      acc += w_[j] * (n_[j] - phi) / den;
    }
    cplx out = acc + exact;
    if (pv_mode) out = {out.real(), 0};
    return out;
  }
  cplx cauchy_raw(const LocalPoint& p) const override { return transform(p.z(), false); }
  double pv_raw(const LocalPoint& p) const override { return transform(p.z(), true).real(); }
  cplx d1_raw(cplx z) const override {
    cplx acc = 0;
    for (size_t j = 0; j < s_.size(); ++j) {
      const cplx d = cplx(s_[j]) - z;
      acc += w_[j] * n_[j] / (d * d);
    }
    return acc;
  }
  cplx m3_raw(cplx z) const override {
    cplx acc = 0;
    for (size_t j = 0; j < s_.size(); ++j) {
      const cplx d = cplx(s_[j]) - z;
      acc += w_[j] * n_[j] / (d * d * d);
    }
    return acc;
  }
  LambdaGrid grid_raw(int n) const override {
    LambdaGrid g;
    const GaussRule& r = gauss_legendre(n);
    for (int j = 0; j < n; ++j) {
      const double a = 0.5 * kPi * r.x[j];
      const double c = std::cos(a);
      g.lambda.push_back(g_ * std::tan(a));
      g.weight.push_back(g_ * 0.5 * kPi * r.w[j] / (c * c));
      g.density.push_back(f_(g.lambda.back()));
    }
    return g;
  }

 private:
  static constexpr int kNodes = 1024;
  double g_;
  std::function<double(double)> f_;
  std::vector<double> s_, w_, n_;
};

// Five-point finite differences, stencil kept inside [-L, L].
std::function<double(double, int)> numeric_derivatives(std::function<double(double)> f, double L) {
  return [f, L](double s, int order) -> double {
    if (order == 0) return f(s);
    const double h = 1e-3 * L;
    double c = std::clamp(s, -L + 2 * h, L - 2 * h);
    const double fm2 = f(c - 2 * h), fm1 = f(c - h), f0 = f(c), fp1 = f(c + h), fp2 = f(c + 2 * h);
    double d1 = (fm2 - 8 * fm1 + 8 * fp1 - fp2) / (12 * h);
    double d2 = (-fm2 + 16 * fm1 - 30 * f0 + 16 * fp1 - fp2) / (12 * h * h);
    double d3 = (-fm2 + 2 * fm1 - 2 * fp1 + fp2) / (2 * h * h * h);
    const double sh = s - c;
    switch (order) {
      case 1:
        return d1 + d2 * sh + 0.5 * d3 * sh * sh;
      case 2:
        return d2 + d3 * sh;
      default:
        return d3;
    }
  };
}

}  // namespace detail

// ------------------------------------------------------------- factory
namespace {

double sampled_peak(const detail::ProfileModel& m) {
  const double L = m.support();
  const double span = std::isfinite(L) ? L : 50.0;
  double pk = 0;
  for (int i = 0; i <= 4000; ++i) {
    const double s = -span + 2 * span * i / 4000.0;
    const double v = m.density(s);
    if (!std::isfinite(v)) throw PreconditionError("broadening profile: non-finite density sample");
    if (v < 0) {
      std::ostringstream os;
      os << "broadening profile: negative density " << v << " at lambda = " << s;
      throw PreconditionError(os.str());
    }
    pk = std::max(pk, v);
  }
  return pk;
}

double grid_mass(const detail::ProfileModel& m, int n) {
  const LambdaGrid g = m.grid_raw(n);
  double s = 0;
  for (int j = 0; j < g.size(); ++j) s += g.weight[j] * g.density[j];
  return s;
}

}  // namespace

BroadeningProfile BroadeningProfile::make(const ProfileSpec& spec) {
  using namespace detail;
  std::shared_ptr<ProfileModel> model;
  if (spec.kind != ProfileKind::Table && !(spec.lambda > 0 && std::isfinite(spec.lambda)))
    throw PreconditionError("broadening profile: lambda must be positive and finite");
  if (!(spec.scale > 0)) throw PreconditionError("broadening profile: scale must be positive");
  if (!(spec.holder_mu > 0 && spec.holder_mu <= 1))
    throw PreconditionError("broadening profile: Holder exponent must lie in (0, 1]");
  const double L = spec.lambda;
  switch (spec.kind) {
    case ProfileKind::Box:
      model = std::make_shared<BoxModel>(L);
      break;
    case ProfileKind::RaisedCosine: {
      auto nz = [L](cplx s, int k) -> cplx {
        const double a = kPi / L;
        switch (k) {
          case 0:
            return (1.0 + std::cos(a * s)) / (2 * L);
          case 1:
            return -a * std::sin(a * s) / (2 * L);
          case 2:
            return -a * a * std::cos(a * s) / (2 * L);
          default:
            return a * a * a * std::sin(a * s) / (2 * L);
        }
      };
      model = std::make_shared<SmoothCompactModel>(
          ProfileKind::RaisedCosine, L, [nz](double s, int k) { return nz(cplx(s, 0), k).real(); }, nz);
      break;
    }
    case ProfileKind::Table: {
      if (spec.samples.size() < 3) throw PreconditionError("table profile: need at least 3 samples");
      std::vector<double> x, y;
      for (auto& [s, v] : spec.samples) {
        if (!std::isfinite(s) || !std::isfinite(v)) throw PreconditionError("table profile: non-finite sample");
        if (v < 0) {
          std::ostringstream os;
          os << "table profile: negative sample " << v << " at lambda = " << s;
          throw PreconditionError(os.str());
        }
        if (!x.empty() && s <= x.back()) throw PreconditionError("table profile: abscissae must increase");
        x.push_back(s);
        y.push_back(v);
      }
      const double pk = *std::max_element(y.begin(), y.end());
      if (y.front() > kEndpointTol * pk || y.back() > kEndpointTol * pk)
        throw PreconditionError("table profile: density does not vanish at the support ends");
      y.front() = 0;
      y.back() = 0;
      model = std::make_shared<TableModel>(x, y);
      break;
    }
    case ProfileKind::Lorentzian:
      model = std::make_shared<LorentzianModel>(L);
      break;
    case ProfileKind::CompactCallable: {
      if (!spec.fn) throw PreconditionError("callable profile: missing function");
      const double e0 = std::abs(spec.fn(-L)), e1 = std::abs(spec.fn(L));
      auto tmp = std::make_shared<SmoothCompactModel>(ProfileKind::CompactCallable, L,
                                                      detail::numeric_derivatives(spec.fn, L));
      const double pk = sampled_peak(*tmp);
      if (e0 > kEndpointTol * pk || e1 > kEndpointTol * pk)
        throw PreconditionError("callable profile: density does not vanish at the support ends");
      model = tmp;
      break;
    }
    case ProfileKind::UnboundedCallable: {
      if (!spec.fn) throw PreconditionError("callable profile: missing function");
      auto tmp = std::make_shared<UnboundedModel>(L, spec.fn);
      const double m1 = grid_mass(*tmp, 512), m2 = grid_mass(*tmp, 2048);
      const double far = 1e6 * L;
      const double tail = far * (spec.fn(far) + spec.fn(-far));
      if (!std::isfinite(m1) || !std::isfinite(m2) || std::abs(m1 - m2) > 1e-6 * std::abs(m2) ||
          tail > 1e-6)
        throw PreconditionError("unbounded profile: decay is not integrable");
      model = tmp;
      break;
    }
  }
  model->peak = sampled_peak(*model);
  model->mu = spec.holder_mu;
  const double raw_mass = grid_mass(*model, model->kind() == ProfileKind::Table ? 512 : 256);
  double factor = spec.scale;
  const double mass = raw_mass * factor;
  if (spec.normalize) {
    if (!(mass > 0)) throw PreconditionError("broadening profile: zero mass cannot be normalized");
    factor /= mass;
  } else if (std::abs(mass - 1.0) > kMassTol) {
    std::ostringstream os;
    os.precision(12);
    os << "broadening profile: mass " << mass << " differs from 1";
    throw PreconditionError(os.str());
  }
  model->factor = factor;
  model->mass = raw_mass * factor;
  model->peak *= factor;
  BroadeningProfile out;
  out.impl_ = model;
  return out;
}

ProfileKind BroadeningProfile::kind() const { return impl_->kind(); }
double BroadeningProfile::n(double s) const { return impl_->factor * impl_->density(s); }
double BroadeningProfile::support() const { return impl_->support(); }
double BroadeningProfile::holder_exponent() const { return impl_->mu; }
double BroadeningProfile::mass() const { return impl_->mass; }
double BroadeningProfile::peak() const { return impl_->peak; }

cplx BroadeningProfile::cauchy(cplx z) const { return cauchy(at(z), Side::None); }

cplx BroadeningProfile::cauchy(const LocalPoint& p, Side side) const {
  const cplx z = p.z();
  const bool real_axis = (p.anchor.imag() == 0.0 && p.offset.imag() == 0.0);
  const double f = impl_->factor;
  if (real_axis && impl_->on_support(z.real())) {
    if (side == Side::None)
      throw PreconditionError("cauchy transform: point on the support requires a side");
    const double pv = impl_->pv_raw(p);
    const double nv = impl_->density(z.real());
    const double sg = side == Side::Plus ? 1.0 : -1.0;
    return f * cplx(pv, sg * kPi * nv);
  }
  if (real_axis && std::isfinite(support()) && std::abs(z.real()) == support() && kind() == ProfileKind::Box)
    throw PreconditionError("cauchy transform: box endpoint is a logarithmic singularity");
  const cplx v = f * impl_->cauchy_raw(p);
  if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
    throw NumericalError("cauchy transform: non-finite value");
  return v;
}

double BroadeningProfile::principal_value(double lambda) const {
  return impl_->factor * impl_->pv_raw(at(cplx(lambda, 0)));
}

cplx BroadeningProfile::cauchy_d1(cplx z) const { return impl_->factor * impl_->d1_raw(z); }
cplx BroadeningProfile::cauchy_d2(cplx z) const { return impl_->factor * impl_->m3_raw(z); }

double BroadeningProfile::pi_moment(double lambda, double nu) const {
  return impl_->factor * impl_->pi_raw(lambda, nu);
}

std::pair<double, double> BroadeningProfile::second_moments(double lambda, double nu) const {
  if (nu == 0.0) {
    if (impl_->on_support(lambda) || std::abs(lambda) == support())
      throw PreconditionError("second moments: nu = 0 on the support is not integrable");
    const cplx z(lambda, 0);
    return {cauchy_d1(z).real(), cauchy_d2(z).real()};
  }
  const cplx d1 = cauchy_d1(cplx(lambda, nu));
  return {d1.real(), d1.imag() / (2 * nu)};
}

LambdaGrid BroadeningProfile::grid(int n) const {
  if (n < 1) throw PreconditionError("lambda grid: need at least one node");
  LambdaGrid g = impl_->grid_raw(n);
  for (auto& d : g.density) d *= impl_->factor;
  return g;
}

cplx BroadeningTransform::eta(cplx z, Side side) const { return eta(at(z), side); }

cplx BroadeningTransform::eta(const LocalPoint& p, Side side) const {
  return p.z() + 0.25 * profile_.cauchy(p, side);
}

}  // namespace mbrh
