#include <doctest.h>

#include <cmath>

#include "mbrh/oracle.hpp"

using namespace mbrh;

namespace {

SimGrid small_grid(int steps) {
  SimGrid g;
  g.T = 1.0;
  g.L = 0.5;
  g.steps_per_unit = steps;
  g.lambda_nodes = 32;
  g.out_t = {0.0, 0.25, 0.5, 0.75, 1.0};
  g.out_x = {0.0, 0.125, 0.25, 0.375, 0.5};
  return g;
}

double max_field_gap(const FieldSolution& a, const FieldSolution& b) {
  double m = 0;
  for (size_t k = 0; k < a.E.size(); ++k) m = std::max(m, std::abs(a.E[k] - b.E[k]));
  return m;
}

const BroadeningProfile& box() {
  static const BroadeningProfile p = BroadeningProfile::box(1.0);
  return p;
}

}  // namespace

TEST_CASE("zero boundary keeps the medium in the ground state") {
  const FieldSolution f = integrate_mb(small_grid(64), box(), 0.0, 1.0);
  for (cplx e : f.E) CHECK(e == cplx(0));
  // The free precession about the sigma3 axis only leaves rounding in N.
  for (const Mat2& F : f.F) CHECK((F + sigma3()).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("field vanishes ahead of the front and equals A0 on it") {
  const double A0 = 1.3;
  const FieldSolution f = integrate_mb(small_grid(128), box(), A0, 0.7);
  for (int i = 0; i < f.nt(); ++i)
    for (int j = 0; j < f.nx(); ++j) {
      if (f.t[i] < f.x[j]) {
        CHECK(f.e(i, j) == cplx(0));
        for (int k = 0; k < f.nl(); ++k) CHECK((f.f(i, j, k) + sigma3()).cwiseAbs().maxCoeff() == 0.0);
      }
      if (f.t[i] == f.x[j]) CHECK(std::abs(f.e(i, j) - A0) < 1e-12);
    }
  // Boundary column.
  for (int i = 0; i < f.nt(); ++i) CHECK(std::abs(f.e(i, 0) - A0 * std::exp(kI * 0.7 * f.t[i])) < 1e-14);
}

TEST_CASE("normalization is preserved by the Bloch update") {
  const FieldSolution f = integrate_mb(small_grid(128), box(), 1.0, 1.0);
  CHECK(f.normalization_drift < 1e-12);
  for (size_t k = 0; k < f.F.size(); ++k) {
    CHECK(std::abs(f.F[k].trace()) < 1e-15);
    CHECK((f.F[k] - f.F[k].adjoint()).cwiseAbs().maxCoeff() < 1e-15);
  }
}

TEST_CASE("self-convergence is second order") {
  const FieldSolution a = integrate_mb(small_grid(64), box(), 1.0, 1.0);
  const FieldSolution b = integrate_mb(small_grid(128), box(), 1.0, 1.0);
  const FieldSolution c = integrate_mb(small_grid(256), box(), 1.0, 1.0);
  const double e1 = max_field_gap(a, b), e2 = max_field_gap(b, c);
  CHECK(e2 > 0);
  CHECK(e1 / e2 > 3.5);
  CHECK(e1 / e2 < 4.5);
}

TEST_CASE("drift limit aborts the run") {
  SimGrid g = small_grid(64);
  g.drift_limit = 0.0;
  CHECK_THROWS_AS(integrate_mb(g, box(), 1.0, 1.0), NumericalError);
}

TEST_CASE("output axes must lie on the lattice") {
  SimGrid g = small_grid(64);
  g.out_x = {0.1};
  CHECK_THROWS_AS(integrate_mb(g, box(), 1.0, 1.0), PreconditionError);
  g = small_grid(64);
  g.out_t = {1.5};
  CHECK_THROWS_AS(integrate_mb(g, box(), 1.0, 1.0), PreconditionError);
}

TEST_CASE("compare_fields") {
  const FieldSolution a = integrate_mb(small_grid(64), box(), 1.0, 1.0);
  const Discrepancy same = compare_fields(a, a, [](double, double) { return true; });
  CHECK(same.count == 25);
  CHECK(same.max_E == 0.0);
  CHECK(same.max_F == 0.0);

  FieldSolution b = a;
  b.e(2, 1) += cplx(0, 1e-3);
  const Discrepancy d = compare_fields(a, b, [](double t, double) { return t > 0.1; });
  CHECK(d.count == 20);
  CHECK(d.max_E == doctest::Approx(1e-3).epsilon(1e-9));
  CHECK(d.rms_E == doctest::Approx(1e-3 / std::sqrt(20.0)).epsilon(1e-9));

  FieldSolution off = a;
  off.x[1] = 0.1;
  CHECK_THROWS_AS(compare_fields(a, off, [](double, double) { return true; }), PreconditionError);
}
