#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "json.hpp"
#include "mbrh/csv.hpp"

namespace fs = std::filesystem;
using namespace mbrh;

namespace {

std::string cli() {
  const char* p = std::getenv("MBRH_CLI");
  REQUIRE_MESSAGE(p != nullptr, "MBRH_CLI is not set");
  return p;
}

fs::path scratch(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("mbrh_cli_test_" + std::to_string(::getpid())) / name;
  fs::remove_all(d);
  fs::create_directories(d.parent_path());
  return d;
}

fs::path write_config(const fs::path& where, const std::string& text) {
  fs::create_directories(where.parent_path());
  std::ofstream(where) << text;
  return where;
}

int run(const std::string& sub, const fs::path& config, const fs::path& out, const std::string& extra = "") {
  const std::string cmd = cli() + " " + sub + " --config " + config.string() + " --out " + out.string() + " " +
                          extra + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const char* kSmall = R"({
  // comments are accepted
  "grid": {"T": 1.0, "L": 0.5, "nt": 3, "nx": 3, "nlambda": 8, "oracle_steps_per_unit": 64},
  "solver": {"nodes_per_piece": 48, "probe_count": 3},
  "spectrum": {"lambda_min": -2, "lambda_max": 2, "count": 41}
})";

}  // namespace

TEST_CASE("spectrum: reflection coefficient is imaginary at lambda = 0 for the reference boundary") {
  const fs::path out = scratch("spectrum");
  const fs::path cfg = write_config(out.parent_path() / "spectrum.json", kSmall);
  REQUIRE(run("spectrum", cfg, out) == 0);
  const CsvTable t = read_csv((out / "spectrum.csv").string());
  CHECK(t.kind == "spectrum");
  const int cl = t.column("lambda"), cr = t.column("re_r"), ci = t.column("im_r");
  bool seen = false;
  for (const auto& row : t.rows) {
    CHECK(row[cr] * row[cr] + row[ci] * row[ci] <= 1 + 1e-12);
    if (row[cl] == 0.0) {
      seen = true;
      CHECK(std::abs(row[cr]) < 1e-12);
    }
  }
  CHECK(seen);
  const auto diag = nlohmann::json::parse(slurp(out / "diagnostics.json"));
  CHECK(diag["status"] == "ok");
}

TEST_CASE("phase: stationary points at xi = 3 for the unit box") {
  const fs::path out = scratch("phase");
  const fs::path cfg = write_config(out.parent_path() / "phase.json", kSmall);
  REQUIRE(run("phase", cfg, out) == 0);
  const auto sp = nlohmann::json::parse(slurp(out / "stationary_points.json"));
  CHECK(sp["xi"].get<double>() == 3.0);
  CHECK(sp["lambda_minus"].get<double>() == doctest::Approx(-2.0).epsilon(1e-12));
  CHECK(sp["lambda_plus"].get<double>() == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(fs::exists(out / "level_line.csv"));
}

TEST_CASE("invalid configuration exits with 2 and writes nothing") {
  const fs::path out = scratch("invalid");
  const fs::path cfg =
      write_config(out.parent_path() / "invalid.json", R"({"broadening": {"type": "box", "lambda": -1}})");
  CHECK(run("solve", cfg, out) == 2);
  CHECK_FALSE(fs::exists(out / "diagnostics.json"));
  CHECK_FALSE(fs::exists(out / "field.csv"));

  const fs::path unknown = write_config(out.parent_path() / "unknown.json", R"({"grid": {"dt": 0.1}})");
  CHECK(run("spectrum", unknown, out) == 2);
  CHECK_FALSE(fs::exists(out / "spectrum.csv"));
}

TEST_CASE("missing config file and missing inputs are I/O errors") {
  const fs::path out = scratch("io");
  CHECK(run("spectrum", out.parent_path() / "does_not_exist.json", out) == 4);
  const fs::path cfg = write_config(out.parent_path() / "io.json", kSmall);
  fs::create_directories(out);
  CHECK(run("plotdata", cfg, out) == 4);
}

TEST_CASE("solve and plotdata are deterministic") {
  const fs::path cfg = write_config(scratch("cfg").parent_path() / "solve.json", kSmall);
  const fs::path a = scratch("det_a"), b = scratch("det_b");
  REQUIRE(run("solve", cfg, a, "--seed 3") == 0);
  REQUIRE(run("solve", cfg, b, "--seed 3 --threads 2") == 0);
  for (const char* f : {"field.csv", "density.csv", "solver.csv"}) {
    CHECK(fs::exists(a / f));
    CHECK(slurp(a / f) == slurp(b / f));
  }
  // Causality in the written field: t <= x rows are zero.
  const CsvTable t = read_csv((a / "field.csv").string());
  const int ct = t.column("t"), cx = t.column("x"), ca = t.column("abs_E");
  for (const auto& row : t.rows)
    if (row[ct] <= row[cx]) CHECK(row[ca] < 1e-8);
  const auto diag = nlohmann::json::parse(slurp(a / "diagnostics.json"));
  CHECK(diag["status"] == "ok");
  CHECK(diag["checks"].size() >= 4);

  REQUIRE(run("plotdata", cfg, a) == 0);
  for (const char* f : {"plot_heatmap.csv", "plot_signature.csv", "plot_level_line.csv", "plot_contour.csv",
                        "plot_drift.csv"})
    CHECK(fs::exists(a / f));
  CHECK(read_csv((a / "plot_signature.csv").string()).rows.size() == 200u * 200u);
}

TEST_CASE("oracle and compare") {
  const fs::path cfg = write_config(scratch("cfg2").parent_path() / "cmp.json", kSmall);
  const fs::path out = scratch("compare");
  REQUIRE(run("compare", cfg, out) == 0);
  const CsvTable t = read_csv((out / "compare.csv").string());
  CHECK(t.rows.size() == 7u);  // the two points on the front are skipped
  for (const auto& row : t.rows) CHECK(row[t.column("abs_diff")] < 5e-2);
  CHECK(fs::exists(out / "oracle_field.csv"));
  CHECK(fs::exists(out / "oracle_density.csv"));
}
