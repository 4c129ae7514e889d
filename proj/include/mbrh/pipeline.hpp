// Orchestration shared by the command line tool and the acceptance run:
// problem setup from a configuration, the (t, x) sweep of solves with
// reconstruction, and per-point solver diagnostics.
// SPDX-License-Identifier: MIT
#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "mbrh/config.hpp"
#include "mbrh/reconstruct.hpp"
#include "mbrh/rhsolver.hpp"
#include "mbrh/spectral.hpp"

namespace mbrh {

struct Problem {
  BroadeningProfile profile;
  BroadeningTransform transform;
  ScatteringData scattering;

  static Problem make(double A0, double omega0, const ProfileSpec& spec);
  double A0() const { return scattering.plane_wave().A0; }
  double omega0() const { return scattering.plane_wave().omega0; }
};

// Throws ConfigError when the configured profile or boundary is rejected.
Problem make_problem(const RunConfig& c);
RHSettings rh_settings(const RunConfig& c);

// Max |M_- - M_+ J| over four Gauss parameters per panel, skipping panels
// with an end within `radius` of any point of `exclude`.
double held_out_jump_residual(const RHInstance& inst, const std::vector<cplx>& exclude = {},
                              double radius = 1e-3);

struct PointDiagnostics {
  double t = 0, x = 0;
  bool trivial = true;
  int nodes = 0;
  double cond = 0, linear_residual = 0;
  double det_drift = 0;      // max |det M - 1| over the probes
  double jump_residual = 0;  // held-out, 0 for closed-form points
  double seconds = 0;
  std::string error;  // nonempty when the point failed
};

struct SweepOptions {
  int threads = 1;
  bool density = true;
  int probe_count = 10;
  std::uint64_t seed = 0;
  bool jump_residual = true;
};

// Solves at every (t[i], x[j]) accepted by mask (all when empty) and fills
// E, m and, optionally, F on the lambda grid. Failed points stay NaN and are
// reported in diag; the function itself does not throw for them.
FieldSolution rh_sweep(const Problem& pb, const RHSettings& s, const std::vector<double>& t,
                       const std::vector<double>& x, const LambdaGrid& grid, const SweepOptions& opt,
                       std::vector<PointDiagnostics>* diag,
                       const std::function<bool(int i, int j)>& mask = {});

// Uniform axis of n points on [a, b] (just a when n == 1).
std::vector<double> linspace(double a, double b, int n);

}  // namespace mbrh
