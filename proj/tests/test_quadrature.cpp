// SPDX-License-Identifier: MIT
#include <cmath>

#include "doctest.h"
#include "mbrh/quadrature.hpp"

using namespace mbrh;

TEST_CASE("gauss-legendre integrates polynomials exactly") {
  for (int n : {1, 2, 5, 16, 64, 200}) {
    const GaussRule& r = gauss_legendre(n);
    for (int k = 0; k <= 2 * n - 1 && k <= 40; ++k) {
      double s = 0;
      for (int j = 0; j < n; ++j) s += r.w[j] * std::pow(r.x[j], k);
      const double exact = (k % 2 == 0) ? 2.0 / (k + 1) : 0.0;
      CHECK(std::abs(s - exact) < 1e-13);
    }
  }
}

TEST_CASE("complementary node offsets are accurate") {
  const GaussRule& r = gauss_legendre(300);
  for (int j = 0; j < r.size(); ++j) {
    CHECK(r.onepx[j] > 0);
    CHECK(r.onemx[j] > 0);
    CHECK(std::abs(r.onepx[j] + r.onemx[j] - 2.0) < 1e-14);
  }
  // smallest offset, asymptotic j0^2 / (2 (n + 1/2)^2)
  const double j0 = 2.404825557695773;
  CHECK(std::abs(r.onepx[0] / (j0 * j0 / (2 * 300.5 * 300.5)) - 1) < 1e-3);
}

TEST_CASE("differentiation matrix and interpolation") {
  const GaussRule& r = gauss_legendre(24);
  const auto D = differentiation_matrix(r);
  for (int i = 0; i < r.size(); ++i) {
    double d = 0;
    for (int j = 0; j < r.size(); ++j) d += D[i * r.size() + j] * std::sin(2 * r.x[j]);
    CHECK(std::abs(d - 2 * std::cos(2 * r.x[i])) < 1e-11);
  }
  for (double t : {-1.0, -0.37, 0.5, 1.0}) {
    const auto l = lagrange_weights(r, t);
    double v = 0;
    for (int j = 0; j < r.size(); ++j) v += l[j] * std::exp(r.x[j]);
    CHECK(std::abs(v - std::exp(t)) < 1e-13);
  }
}

TEST_CASE("grading maps are monotone and invertible") {
  const GaussRule& r = gauss_legendre(32);
  for (Grading g : {Grading::None, Grading::Start, Grading::End, Grading::Both}) {
    double prev = -1;
    double integral = 0;
    for (int j = 0; j < r.size(); ++j) {
      const GradedPoint gp = grade(g, 4.0, r.x[j], r.onepx[j], r.onemx[j]);
      CHECK(gp.u > prev);
      prev = gp.u;
      CHECK(std::abs(gp.p - (1 + gp.u)) < 1e-15);
      CHECK(std::abs(gp.q - (1 - gp.u)) < 1e-15);
      integral += r.w[j] * gp.dudtau;
      const double back = ungrade(g, 4.0, gp.u);
      CHECK(std::abs(grade(g, 4.0, back, 1 + back, 1 - back).u - gp.u) < 1e-14);
    }
    CHECK(std::abs(integral - 2.0) < 1e-14);
  }
}

TEST_CASE("graded rule resolves a quarter-power endpoint singularity") {
  auto err = [](int n) {
    const GaussRule& r = gauss_legendre(n);
    double s = 0;
    for (int j = 0; j < n; ++j) {
      const GradedPoint gp = grade(Grading::Both, 4.0, r.x[j], r.onepx[j], r.onemx[j]);
      s += r.w[j] * gp.dudtau * std::pow(gp.p, -0.25);
    }
    // int_{-1}^{1} (1+u)^{-1/4} du = (4/3) 2^{3/4}
    return std::abs(s - 4.0 / 3.0 * std::pow(2.0, 0.75));
  };
  MESSAGE("graded errors " << err(16) << " " << err(32) << " " << err(64));
  CHECK(err(16) < 1e-13);
  CHECK(err(32) < 1e-13);
  CHECK(err(64) < 1e-13);
}
