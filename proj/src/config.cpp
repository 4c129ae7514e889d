// SPDX-License-Identifier: MIT
#include "mbrh/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace mbrh {

namespace {

using json = nlohmann::json;

void reject_unknown(const json& obj, const std::set<std::string>& known, const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!known.count(it.key())) throw ConfigError("config: unknown key '" + where + it.key() + "'");
}

template <class T>
void read(const json& obj, const char* key, T& out, const std::string& where) {
  if (!obj.contains(key)) return;
  try {
    out = obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError("config: bad value for '" + where + key + "'");
  }
}

const json& section(const json& root, const char* key) {
  static const json empty = json::object();
  if (!root.contains(key)) return empty;
  const json& s = root.at(key);
  if (!s.is_object()) throw ConfigError(std::string("config: '") + key + "' must be an object");
  return s;
}

void require(bool ok, const std::string& what) {
  if (!ok) throw ConfigError("config: " + what);
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  json root;
  try {
    root = json::parse(text, nullptr, true, true);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: parse error: ") + e.what());
  }
  if (!root.is_object()) throw ConfigError("config: top level must be an object");
  reject_unknown(root, {"boundary", "broadening", "grid", "solver", "phase", "spectrum", "outputs"}, "");

  RunConfig c;
  {
    const json& s = section(root, "boundary");
    reject_unknown(s, {"A0", "omega0"}, "boundary.");
    read(s, "A0", c.boundary.A0, "boundary.");
    read(s, "omega0", c.boundary.omega0, "boundary.");
  }
  {
    const json& s = section(root, "broadening");
    reject_unknown(s, {"type", "lambda", "mu", "normalize", "samples"}, "broadening.");
    read(s, "type", c.broadening.type, "broadening.");
    read(s, "lambda", c.broadening.lambda, "broadening.");
    read(s, "mu", c.broadening.mu, "broadening.");
    read(s, "normalize", c.broadening.normalize, "broadening.");
    if (s.contains("samples")) {
      const json& a = s.at("samples");
      require(a.is_array(), "broadening.samples must be an array of [lambda, n] pairs");
      for (const auto& p : a) {
        require(p.is_array() && p.size() == 2 && p[0].is_number() && p[1].is_number(),
                "broadening.samples entries must be [lambda, n]");
        c.broadening.samples.emplace_back(p[0].get<double>(), p[1].get<double>());
      }
    }
  }
  {
    const json& s = section(root, "grid");
    reject_unknown(s, {"T", "L", "nt", "nx", "nlambda", "oracle_steps_per_unit"}, "grid.");
    read(s, "T", c.grid.T, "grid.");
    read(s, "L", c.grid.L, "grid.");
    read(s, "nt", c.grid.nt, "grid.");
    read(s, "nx", c.grid.nx, "grid.");
    read(s, "nlambda", c.grid.nlambda, "grid.");
    read(s, "oracle_steps_per_unit", c.grid.oracle_steps_per_unit, "grid.");
  }
  {
    const json& s = section(root, "solver");
    reject_unknown(s,
                   {"mode", "nodes_per_piece", "edge_nodes", "truncation_radius", "probe_count", "density", "tolerances"},
                   "solver.");
    read(s, "mode", c.solver.mode, "solver.");
    read(s, "nodes_per_piece", c.solver.nodes_per_piece, "solver.");
    read(s, "edge_nodes", c.solver.edge_nodes, "solver.");
    read(s, "truncation_radius", c.solver.truncation_radius, "solver.");
    read(s, "probe_count", c.solver.probe_count, "solver.");
    read(s, "density", c.solver.density, "solver.");
    const json& tol = section(s, "tolerances");
    reject_unknown(tol, {"jump_residual", "determinant", "condition"}, "solver.tolerances.");
    read(tol, "jump_residual", c.solver.jump_tolerance, "solver.tolerances.");
    read(tol, "determinant", c.solver.det_tolerance, "solver.tolerances.");
    read(tol, "condition", c.solver.cond_limit, "solver.tolerances.");
  }
  {
    const json& s = section(root, "phase");
    reject_unknown(s, {"xi", "resolution", "signature_samples", "t", "x"}, "phase.");
    read(s, "xi", c.phase.xi, "phase.");
    read(s, "resolution", c.phase.resolution, "phase.");
    read(s, "signature_samples", c.phase.signature_samples, "phase.");
    read(s, "t", c.phase.t, "phase.");
    read(s, "x", c.phase.x, "phase.");
  }
  {
    const json& s = section(root, "spectrum");
    reject_unknown(s, {"lambda_min", "lambda_max", "count"}, "spectrum.");
    read(s, "lambda_min", c.spectrum.lambda_min, "spectrum.");
    read(s, "lambda_max", c.spectrum.lambda_max, "spectrum.");
    read(s, "count", c.spectrum.count, "spectrum.");
  }
  {
    const json& s = section(root, "outputs");
    reject_unknown(s, {"directory", "formats"}, "outputs.");
    read(s, "directory", c.outputs.directory, "outputs.");
    read(s, "formats", c.outputs.formats, "outputs.");
  }
  validate(c);
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

void validate(const RunConfig& c) {
  auto pos = [](double v) { return std::isfinite(v) && v > 0; };
  auto tol = [](double v) { return v > 0 && v < 1; };
  require(pos(c.boundary.A0), "boundary.A0 must be positive");
  require(pos(c.boundary.omega0), "boundary.omega0 must be positive");
  require(c.broadening.type == "box" || c.broadening.type == "raised_cosine" || c.broadening.type == "table" ||
              c.broadening.type == "lorentzian",
          "broadening.type must be box, raised_cosine, table or lorentzian");
  if (c.broadening.type != "table") require(pos(c.broadening.lambda), "broadening.lambda must be positive");
  require(c.broadening.mu > 0 && c.broadening.mu <= 1, "broadening.mu must lie in (0, 1]");
  require(pos(c.grid.T) && pos(c.grid.L), "grid.T and grid.L must be positive");
  require(c.grid.nt > 0 && c.grid.nx > 0 && c.grid.nlambda > 0 && c.grid.oracle_steps_per_unit > 0,
          "grid counts must be positive");
  require(c.solver.mode == "finite" || c.solver.mode == "infinite", "solver.mode must be finite or infinite");
  require(c.solver.nodes_per_piece > 0 && c.solver.edge_nodes > 0 && c.solver.probe_count > 0, "solver counts must be positive");
  require(pos(c.solver.truncation_radius), "solver.truncation_radius must be positive");
  require(tol(c.solver.jump_tolerance) && tol(c.solver.det_tolerance),
          "solver tolerances must lie in (0, 1)");
  require(c.solver.cond_limit > 1, "solver.tolerances.condition must exceed 1");
  require(pos(c.phase.xi), "phase.xi must be positive");
  require(c.phase.resolution > 0 && c.phase.signature_samples > 0, "phase counts must be positive");
  require(c.phase.t >= 0 && c.phase.x >= 0, "phase.t and phase.x must be nonnegative");
  require(c.spectrum.count > 0 && c.spectrum.lambda_min < c.spectrum.lambda_max,
          "spectrum range must be nonempty");
  require(!c.outputs.directory.empty(), "outputs.directory must be set");
}

ProfileSpec profile_spec(const RunConfig& c) {
  ProfileSpec s;
  const auto& b = c.broadening;
  if (b.type == "box") {
    s.kind = ProfileKind::Box;
  } else if (b.type == "raised_cosine") {
    s.kind = ProfileKind::RaisedCosine;
  } else if (b.type == "table") {
    s.kind = ProfileKind::Table;
    s.samples = b.samples;
  } else if (b.type == "lorentzian") {
    s.kind = ProfileKind::Lorentzian;
  } else {
    throw ConfigError("config: unknown broadening type '" + b.type + "'");
  }
  s.lambda = b.lambda;
  s.holder_mu = b.mu;
  s.normalize = b.normalize;
  return s;
}

DeformMode deform_mode(const RunConfig& c) {
  return c.solver.mode == "infinite" ? DeformMode::Infinite : DeformMode::Finite;
}

}  // namespace mbrh
