// SPDX-License-Identifier: MIT
#include "mbrh/pipeline.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <random>
#include <thread>

namespace mbrh {

Problem Problem::make(double A0, double omega0, const ProfileSpec& spec) {
  BroadeningProfile prof = BroadeningProfile::make(spec);
  BroadeningTransform tr(prof);
  ScatteringData sd(endpoint_from_boundary(A0, omega0, tr));
  return Problem{std::move(prof), std::move(tr), std::move(sd)};
}

Problem make_problem(const RunConfig& c) {
  try {
    return Problem::make(c.boundary.A0, c.boundary.omega0, profile_spec(c));
  } catch (const PreconditionError& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

RHSettings rh_settings(const RunConfig& c) {
  RHSettings s;
  s.mode = deform_mode(c);
  s.nodes_per_piece = c.solver.nodes_per_piece;
  s.refine_nodes = c.solver.edge_nodes;
  s.max_ray_length = c.solver.truncation_radius;
  s.cond_limit = c.solver.cond_limit;
  return s;
}

double held_out_jump_residual(const RHInstance& inst, const std::vector<cplx>& exclude, double radius) {
  double worst = 0;
  const auto& d = inst.discretization();
  for (int k = 0; k < static_cast<int>(d.panels.size()); ++k) {
    const Panel& P = d.panels[k];
    bool skip = false;
    for (cplx e : exclude) skip = skip || std::abs(P.a - e) < radius || std::abs(P.b - e) < radius;
    if (skip) continue;
    for (double tau : {-0.55, -0.13, 0.31, 0.77}) {
      const ContourPoint cp = inst.at_tau(k, tau);
      const Mat2 Mp = inst.boundary(cp, Side::Plus), Mm = inst.boundary(cp, Side::Minus);
      worst = std::max(worst, (Mm - Mp * inst.jump_at(cp)).cwiseAbs().maxCoeff());
    }
  }
  return worst;
}

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = n == 1 ? a : a + (b - a) * i / (n - 1);
  return v;
}

namespace {

// Probe points away from R and the cut, drawn from a seeded generator.
std::vector<cplx> probes(const ScatteringData& sd, int count, std::uint64_t seed) {
  std::mt19937_64 g(seed);
  std::uniform_real_distribution<double> rad(0.3, 8.0), ang(-kPi, kPi);
  std::vector<cplx> out;
  while (static_cast<int>(out.size()) < count) {
    const cplx z = std::polar(rad(g), ang(g));
    if (std::abs(z.imag()) < 0.05) continue;
    if (std::abs(z.real() - sd.re_e()) < 0.05 && std::abs(z.imag()) < sd.im_e() + 0.05) continue;
    out.push_back(z);
  }
  return out;
}

}  // namespace

FieldSolution rh_sweep(const Problem& pb, const RHSettings& s, const std::vector<double>& t,
                       const std::vector<double>& x, const LambdaGrid& grid, const SweepOptions& opt,
                       std::vector<PointDiagnostics>* diag, const std::function<bool(int, int)>& mask) {
  FieldSolution fs;
  fs.t = t;
  fs.x = x;
  fs.grid = grid;
  fs.allocate(opt.density);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  fs.m.assign(t.size() * x.size(), Mat2::Constant(cplx(nan, nan)));

  std::vector<std::pair<int, int>> work;
  for (int i = 0; i < fs.nt(); ++i)
    for (int j = 0; j < fs.nx(); ++j)
      if (!mask || mask(i, j)) work.emplace_back(i, j);
  std::vector<PointDiagnostics> pd(work.size());
  const std::vector<cplx> zs = probes(pb.scattering, opt.probe_count, opt.seed);
  const std::vector<cplx> edges = pb.profile.compact()
                                      ? std::vector<cplx>{cplx(-pb.profile.support(), 0),
                                                          cplx(pb.profile.support(), 0)}
                                      : std::vector<cplx>{};

  std::atomic<size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const size_t w = next.fetch_add(1);
      if (w >= work.size()) return;
      const auto [i, j] = work[w];
      PointDiagnostics& d = pd[w];
      d.t = t[i];
      d.x = x[j];
      const auto t0 = std::chrono::steady_clock::now();
      try {
        const RHSolution S = RHSolution::compute(pb.scattering, pb.transform, t[i], x[j], s);
        d.trivial = S.trivial();
        if (!S.trivial()) {
          const SolveDiagnostics sd = S.diagnostics();
          d.nodes = sd.nodes;
          d.cond = sd.cond_estimate;
          d.linear_residual = sd.linear_residual;
          for (cplx z : zs) d.det_drift = std::max(d.det_drift, std::abs(S.M(z).determinant() - 1.0));
          if (opt.jump_residual) d.jump_residual = held_out_jump_residual(*S.instance(), edges);
        }
        const FieldSample f = extract_field(S);
        if (opt.density) {
          const RHSolution S0 = RHSolution::compute(pb.scattering, pb.transform, 0.0, x[j], s);
          for (int k = 0; k < grid.size(); ++k) fs.f(i, j, k) = density_matrix(S, S0, grid.lambda[k]);
        }
        fs.e(i, j) = f.E;
        fs.m[fs.idx(i, j)] = f.m;
      } catch (const Error& e) {
        d.error = e.what();
      }
      d.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
  };
  const int nthreads = std::max(1, std::min<int>(opt.threads, static_cast<int>(work.size())));
  if (nthreads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int k = 0; k < nthreads; ++k) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  double drift = 0;
  for (const Mat2& F : fs.F)
    if (F.allFinite()) drift = std::max(drift, std::abs(std::norm(F(0, 0)) + std::norm(F(0, 1)) - 1.0));
  fs.normalization_drift = drift;
  if (diag) *diag = std::move(pd);
  return fs;
}

}  // namespace mbrh
