// Inhomogeneous broadening weight n(lambda) and its Cauchy transform.
// SPDX-License-Identifier: MIT
#pragma once

#include <functional>
#include <limits>
#include <memory>
#include <utility>
#include <vector>

#include "mbrh/common.hpp"

namespace mbrh {

enum class ProfileKind {
  Box,              // n = 1/(2L) on (-L, L)
  RaisedCosine,     // n = (1 + cos(pi s / L)) / (2L)
  Table,            // piecewise linear through samples, compact
  Lorentzian,       // n = g / (pi (s^2 + g^2)), unbounded support
  CompactCallable,  // user function on [-L, L]
  UnboundedCallable // user function on R with integrable decay
};

struct ProfileSpec {
  ProfileKind kind = ProfileKind::Box;
  double lambda = 1.0;  // support bound, or width scale for unbounded kinds
  std::vector<std::pair<double, double>> samples;  // Table
  std::function<double(double)> fn;                // callables
  double holder_mu = 1.0;                          // declared, never verified
  double scale = 1.0;                              // multiplies the density
  bool normalize = false;                          // rescale by computed mass
};

// Quadrature on the support, shared by the oracle and the density-matrix
// integrals: sum_j weight[j] * density[j] * f(lambda[j]) ~ int n f ds.
struct LambdaGrid {
  std::vector<double> lambda, weight, density;
  int size() const { return static_cast<int>(lambda.size()); }
};

namespace detail {
class ProfileModel;
}

class BroadeningProfile {
 public:
  static BroadeningProfile make(const ProfileSpec& spec);
  static BroadeningProfile box(double L) {
    ProfileSpec s;
    s.kind = ProfileKind::Box;
    s.lambda = L;
    return make(s);
  }

  ProfileKind kind() const;
  double n(double s) const;
  // Finite support bound, or +infinity.
  double support() const;
  bool compact() const { return support() < std::numeric_limits<double>::infinity(); }
  double holder_exponent() const;
  double mass() const;
  double peak() const;

  // C(z) = int n(s)/(s - z) ds for z off the support.
  cplx cauchy(cplx z) const;
  // Sided values on the real axis: p.v. +/- i pi n(lambda). Side::None is
  // accepted off the support only.
  cplx cauchy(const LocalPoint& p, Side side) const;
  double principal_value(double lambda) const;
  // C'(z) = int n(s)/(s - z)^2 ds, and C''(z)/2 = int n/(s - z)^3 ds.
  cplx cauchy_d1(cplx z) const;
  cplx cauchy_d2(cplx z) const;

  // Pi(lambda, nu) = int n/((s-lambda)^2 + nu^2) ds.
  double pi_moment(double lambda, double nu) const;
  // I1 = int n ((s-l)^2 - nu^2)/((s-l)^2+nu^2)^2,
  // I2 = int n (s-l)/((s-l)^2+nu^2)^2.
  std::pair<double, double> second_moments(double lambda, double nu) const;

  LambdaGrid grid(int n) const;

 private:
  std::shared_ptr<const detail::ProfileModel> impl_;
};

// eta(z) = z + C(z)/4 and its boundary values.
class BroadeningTransform {
 public:
  explicit BroadeningTransform(BroadeningProfile p) : profile_(std::move(p)) {}
  const BroadeningProfile& profile() const { return profile_; }

  cplx eta(cplx z, Side side = Side::None) const;
  cplx eta(const LocalPoint& p, Side side) const;
  double pi_moment(double lambda, double nu) const { return profile_.pi_moment(lambda, nu); }
  std::pair<double, double> second_moments(double lambda, double nu) const {
    return profile_.second_moments(lambda, nu);
  }

 private:
  BroadeningProfile profile_;
};

}  // namespace mbrh
