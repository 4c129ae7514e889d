// Command line front end: spectrum, phase, solve, oracle, compare, plotdata.
// SPDX-License-Identifier: MIT
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "mbrh/config.hpp"
#include "mbrh/csv.hpp"
#include "mbrh/kernels.hpp"
#include "mbrh/oracle.hpp"
#include "mbrh/phase.hpp"
#include "mbrh/pipeline.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace mbrh;

namespace {

struct Options {
  std::string config;
  std::string out;
  int threads = 1;
  std::uint64_t seed = 0;
  bool verbose = false;
};

struct Run {
  Options opt;
  RunConfig cfg;
  fs::path dir;
  json diag = json::object();
  json checks = json::array();

  void log(const std::string& msg) const {
    if (opt.verbose) std::cerr << "[mbrh] " << msg << '\n';
  }
  std::string path(const std::string& name) const { return (dir / name).string(); }
  void check(const std::string& name, double value, double tol) {
    checks.push_back({{"name", name}, {"value", value}, {"tolerance", tol}, {"pass", value <= tol}});
  }
};

double nan() { return std::numeric_limits<double>::quiet_NaN(); }

void write_json(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot create '" + path + "'");
  out << j.dump(2) << '\n';
  if (!out) throw IoError("write failed for '" + path + "'");
}

std::vector<double> t_axis(const RunConfig& c) { return linspace(0.0, c.grid.T, c.grid.nt); }
std::vector<double> x_axis(const RunConfig& c) { return linspace(0.0, c.grid.L, c.grid.nx); }

void write_field(const std::string& path, const FieldSolution& f) {
  CsvWriter w(path, "field", {"t", "x", "re_E", "im_E", "abs_E"});
  for (int i = 0; i < f.nt(); ++i)
    for (int j = 0; j < f.nx(); ++j) {
      const cplx e = f.e(i, j);
      w.row({f.t[i], f.x[j], e.real(), e.imag(), std::abs(e)});
    }
  w.close();
}

void write_density(const std::string& path, const FieldSolution& f) {
  CsvWriter w(path, "density", {"t", "x", "lambda", "N", "re_rho", "im_rho"});
  for (int i = 0; i < f.nt(); ++i)
    for (int j = 0; j < f.nx(); ++j)
      for (int k = 0; k < f.nl(); ++k) {
        const Mat2& F = f.f(i, j, k);
        w.row({f.t[i], f.x[j], f.grid.lambda[k], F(0, 0).real(), F(0, 1).real(), F(0, 1).imag()});
      }
  w.close();
}

// ---------------------------------------------------------------- spectrum
void cmd_spectrum(Run& r) {
  const Problem pb = make_problem(r.cfg);
  const ScatteringData& sd = pb.scattering;
  const auto& sp = r.cfg.spectrum;
  CsvWriter w(r.path("spectrum.csv"), "spectrum", {"lambda", "re_r", "im_r", "n", "re_a", "im_a", "re_b", "im_b"});
  double ident = 0, rmax = 0;
  for (int k = 0; k < sp.count; ++k) {
    const double l = sp.count == 1 ? sp.lambda_min
                                   : sp.lambda_min + (sp.lambda_max - sp.lambda_min) * k / (sp.count - 1);
    if (l == sd.re_e()) continue;  // self-intersection of the contour
    const cplx rv = sd.r(cplx(l, 0)), a = sd.a(cplx(l, 0)), b = sd.b(cplx(l, 0));
    ident = std::max(ident, std::abs(a * a - b * b - 1.0));
    rmax = std::max(rmax, std::abs(rv));
    w.row({l, rv.real(), rv.imag(), pb.profile.n(l), a.real(), a.imag(), b.real(), b.imag()});
  }
  w.close();
  const PlaneWaveData& pw = sd.plane_wave();
  r.diag["E"] = {pw.E.real(), pw.E.imag()};
  r.diag["alpha0"] = pw.alpha0;
  r.diag["beta0"] = pw.beta0;
  r.check("max |a^2 - b^2 - 1| on samples", ident, 1e-12);
  r.check("max |r| - 1 on samples", rmax - 1.0, 1e-12);
  r.check("|r(Re E + 0) - i|", std::abs(sd.r(cplx(sd.re_e(), 0), Side::Plus) - kI), 1e-12);
}

// ---------------------------------------------------------------- phase
void cmd_phase(Run& r) {
  const Problem pb = make_problem(r.cfg);
  const double xi = r.cfg.phase.xi;
  json sp = {{"xi", xi}};
  const auto st = stationary_points(pb.transform, xi);
  if (st) {
    sp["lambda_minus"] = st->first;
    sp["lambda_plus"] = st->second;
  } else {
    sp["lambda_minus"] = nullptr;
    sp["lambda_plus"] = nullptr;
  }
  write_json(r.path("stationary_points.json"), sp);

  const LevelLine ll = level_line(pb.transform, xi, r.cfg.phase.resolution);
  CsvWriter w(r.path("level_line.csv"), "level_line", {"branch", "lambda", "nu", "pi_minus_inv_xi"});
  double worst = 0, bound = 0;
  for (int b = 0; b < 2; ++b)
    for (cplx z : b == 0 ? ll.upper : ll.lower) {
      const double res = pb.transform.pi_moment(z.real(), z.imag()) - 1.0 / xi;
      worst = std::max(worst, std::abs(res));
      bound = std::max(bound, std::abs(z.imag()) - std::sqrt(xi));
      w.row({static_cast<double>(b), z.real(), z.imag(), res});
    }
  w.close();
  r.diag["level_line_closed"] = ll.closed;
  r.check("level line |Pi - 1/xi|", worst, 1e-10);
  r.check("level line |nu| - sqrt(xi)", bound, 0.0);
}

// ---------------------------------------------------------------- solve
FieldSolution run_solve(Run& r, const Problem& pb) {
  const RHSettings s = rh_settings(r.cfg);
  SweepOptions so;
  so.threads = r.opt.threads;
  so.density = r.cfg.solver.density;
  so.probe_count = r.cfg.solver.probe_count;
  so.seed = r.opt.seed;
  std::vector<PointDiagnostics> pd;
  r.log("solving " + std::to_string(r.cfg.grid.nt * r.cfg.grid.nx) + " points");
  const auto t0 = std::chrono::steady_clock::now();
  FieldSolution f = rh_sweep(pb, s, t_axis(r.cfg), x_axis(r.cfg), pb.profile.grid(r.cfg.grid.nlambda), so, &pd);
  r.diag["solve_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  CsvWriter w(r.path("solver.csv"), "solver",
              {"t", "x", "trivial", "nodes", "cond", "linear_residual", "det_drift", "jump_residual", "failed"});
  double det = 0, jump = 0;
  int failed = 0;
  json errors = json::array();
  for (const auto& d : pd) {
    w.row({d.t, d.x, d.trivial ? 1.0 : 0.0, static_cast<double>(d.nodes), d.cond, d.linear_residual, d.det_drift,
           d.jump_residual, d.error.empty() ? 0.0 : 1.0});
    det = std::max(det, d.det_drift);
    jump = std::max(jump, d.jump_residual);
    if (!d.error.empty()) {
      ++failed;
      errors.push_back({{"t", d.t}, {"x", d.x}, {"error", d.error}});
    }
  }
  w.close();
  write_field(r.path("field.csv"), f);
  if (r.cfg.solver.density) write_density(r.path("density.csv"), f);

  double causal = 0, bdry = 0;
  for (int i = 0; i < f.nt(); ++i)
    for (int j = 0; j < f.nx(); ++j) {
      const cplx e = f.e(i, j);
      if (!std::isfinite(std::abs(e))) continue;
      if (f.t[i] <= f.x[j]) causal = std::max(causal, std::abs(e));
      if (f.x[j] == 0.0 && f.t[i] > 0)
        bdry = std::max(bdry, std::abs(e - pb.A0() * std::exp(kI * pb.omega0() * f.t[i])) / pb.A0());
    }
  r.check("causality max |E| for t <= x", causal, 1e-8);
  r.check("boundary relative error at x = 0", bdry, 1e-3);
  r.check("max |det M - 1| at probes", det, r.cfg.solver.det_tolerance);
  r.check("held-out jump residual", jump, r.cfg.solver.jump_tolerance);
  if (r.cfg.solver.density) {
    r.check("max |N^2 + |rho|^2 - 1|", f.normalization_drift, 1e-6);
    if (f.nt() >= 3 && f.nx() >= 3) {
      const ResidualReport rep = residual_suite(f, pb.profile);
      r.diag["residuals"] = {{"mb_field", rep.mb_field},
                             {"mb_density", rep.mb_density},
                             {"zero_curvature", rep.zero_curvature},
                             {"hermitian", rep.hermitian},
                             {"trace", rep.trace},
                             {"points", rep.points}};
    }
  }
  r.diag["failed_points"] = failed;
  r.diag["errors"] = errors;
  if (failed > 0) {
    r.diag["partial"] = true;
    throw NumericalError(std::to_string(failed) + " solve point(s) failed; partial results written");
  }
  return f;
}

void cmd_solve(Run& r) {
  const Problem pb = make_problem(r.cfg);
  run_solve(r, pb);
}

// ---------------------------------------------------------------- oracle
FieldSolution run_oracle(Run& r, const Problem& pb) {
  SimGrid g;
  g.T = r.cfg.grid.T;
  g.L = r.cfg.grid.L;
  g.steps_per_unit = r.cfg.grid.oracle_steps_per_unit;
  g.lambda_nodes = r.cfg.grid.nlambda;
  g.out_t = t_axis(r.cfg);
  g.out_x = x_axis(r.cfg);
  g.store_density = r.cfg.solver.density;
  r.log("integrating the direct system");
  const auto t0 = std::chrono::steady_clock::now();
  FieldSolution f;
  try {
    f = integrate_mb(g, pb.profile, pb.A0(), pb.omega0());
  } catch (const PreconditionError& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  r.diag["oracle_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  write_field(r.path("oracle_field.csv"), f);
  if (g.store_density) write_density(r.path("oracle_density.csv"), f);
  double causal = 0;
  for (int i = 0; i < f.nt(); ++i)
    for (int j = 0; j < f.nx(); ++j)
      if (f.t[i] < f.x[j]) causal = std::max(causal, std::abs(f.e(i, j)));
  r.check("oracle causality max |E| for t < x", causal, 1e-4);
  r.check("oracle normalization drift", f.normalization_drift, 1e-6);
  return f;
}

void cmd_oracle(Run& r) {
  const Problem pb = make_problem(r.cfg);
  run_oracle(r, pb);
}

// ---------------------------------------------------------------- compare
void cmd_compare(Run& r) {
  const Problem pb = make_problem(r.cfg);
  const FieldSolution o = run_oracle(r, pb);
  const FieldSolution s = run_solve(r, pb);
  // The front t = x carries a jump of E; both sides are compared away from it.
  const Discrepancy d = compare_fields(o, s, [](double t, double x) { return t != x; });
  CsvWriter w(r.path("compare.csv"), "compare", {"t", "x", "re_E_rh", "im_E_rh", "re_E_oracle", "im_E_oracle", "abs_diff"});
  for (const auto& row : d.rows)
    w.row({row.t, row.x, row.E_b.real(), row.E_b.imag(), row.E_a.real(), row.E_a.imag(), std::abs(row.E_a - row.E_b)});
  w.close();
  r.diag["compare"] = {{"max_E", d.max_E}, {"rms_E", d.rms_E}, {"max_F", d.max_F}, {"rms_F", d.rms_F}, {"points", d.count}};
  r.check("max |E_rh - E_oracle|", d.max_E, 5e-2);
}

// ---------------------------------------------------------------- plotdata
void cmd_plotdata(Run& r) {
  const std::string field = r.path("field.csv");
  if (!fs::exists(field)) throw IoError("no solve results in '" + r.dir.string() + "' (field.csv missing)");
  const CsvTable ft = read_csv(field);
  const Problem pb = make_problem(r.cfg);
  {
    const int ct = ft.column("t"), cx = ft.column("x"), ca = ft.column("abs_E");
    CsvWriter w(r.path("plot_heatmap.csv"), "heatmap", {"t", "x", "abs_E"});
    for (const auto& row : ft.rows) w.row({row[ct], row[cx], row[ca]});
    w.close();
  }
  const std::string dens = r.path("density.csv");
  if (fs::exists(dens)) {
    const CsvTable dt = read_csv(dens);
    const int ct = dt.column("t"), cx = dt.column("x"), cn = dt.column("N"), cr = dt.column("re_rho"),
              ci = dt.column("im_rho");
    CsvWriter w(r.path("plot_drift.csv"), "drift", {"t", "x", "max_drift"});
    size_t k = 0;
    while (k < dt.rows.size()) {
      const double t = dt.rows[k][ct], x = dt.rows[k][cx];
      double m = 0;
      for (; k < dt.rows.size() && dt.rows[k][ct] == t && dt.rows[k][cx] == x; ++k) {
        const auto& q = dt.rows[k];
        m = std::max(m, std::abs(q[cn] * q[cn] + q[cr] * q[cr] + q[ci] * q[ci] - 1.0));
      }
      w.row({t, x, m});
    }
    w.close();
  }
  const auto& ph = r.cfg.phase;
  {
    const PhaseField pf(pb.transform, ph.t, ph.x);
    const int n = ph.signature_samples;
    const double half = std::max(3.0, 1.5 * std::sqrt(std::max(pf.xi(), 1.0)) + 1.0);
    CsvWriter w(r.path("plot_signature.csv"), "signature", {"lambda", "nu", "sign"});
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        const double l = -half + 2 * half * (a + 0.5) / n, nu = -half + 2 * half * (b + 0.5) / n;
        w.row({l, nu, static_cast<double>(pf.signature(cplx(l, nu)))});
      }
    w.close();
  }
  {
    const LevelLine ll = level_line(pb.transform, ph.xi, ph.resolution);
    CsvWriter w(r.path("plot_level_line.csv"), "level_line", {"branch", "lambda", "nu", "within_bound"});
    for (int b = 0; b < 2; ++b)
      for (cplx z : b == 0 ? ll.upper : ll.lower)
        w.row({static_cast<double>(b), z.real(), z.imag(), std::abs(z.imag()) <= std::sqrt(ph.xi) ? 1.0 : 0.0});
    w.close();
  }
  {
    CsvWriter w(r.path("plot_contour.csv"), "contour", {"panel", "role", "re", "im"});
    const Contour sig = build_sigma(pb.scattering.E());
    Contour c = sig;
    if (pb.profile.compact() && ph.t > ph.x) {
      const double xi = PhaseField(pb.transform, ph.t, ph.x).xi();
      const double l2 = default_lambda2(pb.scattering, pb.transform, xi);
      c = build_deformed_contour(DeformMode::Finite, pb.scattering.E(), -l2, l2, {}, {}, LensShape{},
                                 pb.profile.support());
    }
    for (auto& pc : c.pieces) pc.truncate_length = std::min(pc.truncate_length, 20.0);
    DiscretizeOptions o;
    o.nodes_per_piece = 32;
    o.refine_levels = 0;
    const Discretization d = discretize(c, o);
    for (const Node& nd : d.nodes)
      w.row({static_cast<double>(nd.panel), static_cast<double>(static_cast<int>(d.panels[nd.panel].role)),
             nd.z.real(), nd.z.imag()});
    w.close();
  }
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const PreconditionError*>(&e)) return 2;
  if (dynamic_cast<const IoError*>(&e)) return 4;
  return 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Maxwell-Bloch inverse scattering pipeline"};
  app.require_subcommand(1);
  Options opt;
  std::map<std::string, void (*)(Run&)> table{{"spectrum", cmd_spectrum}, {"phase", cmd_phase},
                                               {"solve", cmd_solve},       {"oracle", cmd_oracle},
                                               {"compare", cmd_compare},   {"plotdata", cmd_plotdata}};
  const std::map<std::string, std::string> help{
      {"spectrum", "reflection coefficient and spectral functions on R"},
      {"phase", "stationary points and level line"},
      {"solve", "Riemann-Hilbert sweep and field reconstruction"},
      {"oracle", "direct integration of the Maxwell-Bloch system"},
      {"compare", "solve and oracle on the same grid, with discrepancy table"},
      {"plotdata", "plot-ready tables from a previous solve"}};
  for (const auto& [name, fn] : table) {
    CLI::App* sub = app.add_subcommand(name, help.at(name));
    sub->add_option("--config", opt.config, "configuration file (JSON)")->required();
    sub->add_option("--out", opt.out, "output directory (overrides outputs.directory)");
    sub->add_option("--threads", opt.threads, "worker threads for the solve sweep")->check(CLI::PositiveNumber);
    sub->add_option("--seed", opt.seed, "seed for probe sampling");
    sub->add_flag("--verbose", opt.verbose, "progress on stderr");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  const std::string name = app.get_subcommands().front()->get_name();

  Run r;
  r.opt = opt;
  try {
    r.cfg = load_config(opt.config);
    if (!opt.out.empty()) r.cfg.outputs.directory = opt.out;
    r.dir = r.cfg.outputs.directory;
    if (name != "plotdata") {
      std::error_code ec;
      fs::create_directories(r.dir, ec);
      if (ec) throw IoError("cannot create output directory '" + r.dir.string() + "'");
    } else if (!fs::is_directory(r.dir)) {
      throw IoError("output directory '" + r.dir.string() + "' does not exist");
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e);
  }

  r.diag["command"] = name;
  r.diag["csv_version"] = kCsvVersion;
  r.diag["kernel_variant"] = kernels::active_variant();
  int code = 0;
  try {
    table.at(name)(r);
    r.diag["status"] = "ok";
  } catch (const std::exception& e) {
    code = exit_code_for(e);
    std::cerr << "error: " << e.what() << '\n';
    r.diag["status"] = "aborted";
    r.diag["error"] = e.what();
    r.diag["exit_code"] = code;
    if (code == 2) return code;  // invalid input: no artifacts
  }
  r.diag["checks"] = r.checks;
  try {
    write_json(r.path("diagnostics.json"), r.diag);
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 4;
  }
  return code;
}
