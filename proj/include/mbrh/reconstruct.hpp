// Physical fields from solved Riemann-Hilbert data: the envelope E(t,x), the
// density matrix F(t,x,lambda), the Cauchy transform G of F and residuals of
// the matrix Maxwell-Bloch system.
// SPDX-License-Identifier: MIT
#pragma once

#include <optional>
#include <vector>

#include "mbrh/broadening.hpp"
#include "mbrh/rhsolver.hpp"

namespace mbrh {

// H = (1/2) [[0, E], [-conj E, 0]].
Mat2 h_matrix(cplx E);

struct FieldSample {
  Mat2 m;   // coefficient of 1/z in M
  cplx E;   // -4 i m_12
  Mat2 H;   // -i [sigma3, m]
};

FieldSample extract_field(const RHSolution& s);

// F(t,x,lambda) from the solution at (t,x) and the one at (0,x).
// At lambda = Re E the value is filled by cubic interpolation.
Mat2 density_matrix(const RHSolution& at_tx, const RHSolution& at_0x, double lambda);

// Fields on a tensor grid. Index order: E[i * nx + j], F[(i * nx + j) * nl + k]
// for t[i], x[j], lambda[k]. Points never computed hold NaN.
struct FieldSolution {
  std::vector<double> t, x;
  LambdaGrid grid;
  std::vector<cplx> E;
  std::vector<Mat2> m;  // empty for the direct integrator
  std::vector<Mat2> F;
  double normalization_drift = 0;  // max |N^2 + |rho|^2 - 1|

  int nt() const { return static_cast<int>(t.size()); }
  int nx() const { return static_cast<int>(x.size()); }
  int nl() const { return grid.size(); }
  int idx(int i, int j) const { return i * nx() + j; }
  cplx& e(int i, int j) { return E[idx(i, j)]; }
  cplx e(int i, int j) const { return E[idx(i, j)]; }
  Mat2& f(int i, int j, int k) { return F[static_cast<size_t>(idx(i, j)) * nl() + k]; }
  const Mat2& f(int i, int j, int k) const { return F[static_cast<size_t>(idx(i, j)) * nl() + k]; }

  // Allocates NaN-filled storage for the given axes (F only when with_f).
  void allocate(bool with_f);
};

// G(z) = (1/4) int F(s) n(s) / (s - z) ds over the slice (t[i], x[j]).
// Off the support use side None. On the support a side is mandatory and the
// value of F at lambda must be supplied; the principal value is formed by
// subtracting F(lambda).
Mat2 cauchy_of_F(const FieldSolution& fs, const BroadeningProfile& prof, int i, int j, cplx z,
                 Side side = Side::None, const std::optional<Mat2>& F_at = std::nullopt);

struct ResidualReport {
  double mb_field = 0;    // max |H_t + H_x - (1/4) int [sigma3, F] n ds|
  double mb_density = 0;  // max |F_t + [i lambda sigma3 + H, F]|
  double zero_curvature = 0;  // max |U_x - V_t + [U, V]| at the probe points z
  double hermitian = 0;       // max |F - F^*|
  double trace = 0;           // max |tr F|
  double normalization = 0;   // max |N^2 + |rho|^2 - 1|
  int points = 0;             // interior points used
};

// Centered differences at every interior (i, j) whose cross stencil
// (i +- 1, j), (i, j +- 1) is populated; corner points are never read.
// The t and x axes must be uniform. zc_probes are the spectral points where
// the zero-curvature condition is checked (off the support).
ResidualReport residual_suite(const FieldSolution& fs, const BroadeningProfile& prof,
                              const std::vector<cplx>& zc_probes = {cplx(0, 1.5), cplx(2.5, 0.5)});

}  // namespace mbrh
