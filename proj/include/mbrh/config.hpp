// Run configuration: a nested JSON document with defaults for every key.
// SPDX-License-Identifier: MIT
#pragma once

#include <string>
#include <utility>
#include <vector>

#include "mbrh/broadening.hpp"
#include "mbrh/contour.hpp"

namespace mbrh {

struct RunConfig {
  struct Boundary {
    double A0 = 1.0;
    double omega0 = 1.0;
  } boundary;

  struct Broadening {
    std::string type = "box";  // box | raised_cosine | table | lorentzian
    double lambda = 1.0;
    double mu = 1.0;
    bool normalize = false;
    std::vector<std::pair<double, double>> samples;
  } broadening;

  struct Grid {
    double T = 2.0, L = 1.0;
    int nt = 9, nx = 9;  // RH sample axes, endpoints included
    int nlambda = 64;
    int oracle_steps_per_unit = 512;
  } grid;

  struct Solver {
    std::string mode = "finite";  // finite | infinite
    int nodes_per_piece = 128;
    int edge_nodes = 8;  // nodes per geometric layer at the support edges
    double truncation_radius = 1e4;
    int probe_count = 10;
    bool density = true;  // reconstruct F on the lambda grid
    double jump_tolerance = 1e-6;
    double det_tolerance = 1e-8;
    double cond_limit = 1e12;
  } solver;

  struct Phase {
    double xi = 3.0;
    int resolution = 400;
    int signature_samples = 200;  // per axis
    double t = 2.0, x = 1.0;      // sample (t, x) for the signature table
  } phase;

  struct Spectrum {
    double lambda_min = -5, lambda_max = 5;
    int count = 201;
  } spectrum;

  struct Outputs {
    std::string directory = "out";
    std::vector<std::string> formats{"csv", "json"};
  } outputs;
};

// Throws ConfigError on malformed text, unknown keys, or invalid values.
RunConfig parse_config(const std::string& text);
// Throws IoError when unreadable.
RunConfig load_config(const std::string& path);
void validate(const RunConfig& c);

// Profile specification of the config; throws ConfigError.
ProfileSpec profile_spec(const RunConfig& c);
DeformMode deform_mode(const RunConfig& c);

}  // namespace mbrh
