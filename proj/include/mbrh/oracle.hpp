// Direct integrator of the Maxwell-Bloch system in the laboratory frame on a
// characteristic grid (dt = dx), used to cross-check the Riemann-Hilbert
// pipeline.
// SPDX-License-Identifier: MIT
#pragma once

#include <functional>
#include <string>
#include <vector>

#include "mbrh/reconstruct.hpp"

namespace mbrh {

struct SimGrid {
  double T = 2.0;  // time extent
  double L = 1.0;  // space extent
  int steps_per_unit = 512;  // 1 / Delta
  int lambda_nodes = 96;
  // Output axes. Every value must be a grid multiple of Delta; empty means
  // every stride-th grid point.
  std::vector<double> out_t, out_x;
  int stride = 8;
  bool store_density = true;
  // Abort when max |N^2 + |rho|^2 - 1| exceeds this during the run.
  double drift_limit = 1e-9;
};

// Boundary E(t, 0) = A0 exp(i omega0 t); E = 0, rho = 0, N = -1 at t = 0.
FieldSolution integrate_mb(const SimGrid& grid, const BroadeningProfile& profile, double A0, double omega0);

struct DiscrepancyRow {
  double t, x;
  cplx E_a, E_b;
};

struct Discrepancy {
  double max_E = 0, rms_E = 0;
  double max_F = 0, rms_F = 0;  // NaN when the lambda grids differ
  int count = 0;
  std::vector<DiscrepancyRow> rows;
};

// Compares the two solutions at every point of b's grid inside the region
// that is populated in b. Each such point must also be a point of a.
Discrepancy compare_fields(const FieldSolution& a, const FieldSolution& b,
                           const std::function<bool(double t, double x)>& region);

}  // namespace mbrh
