// End-to-end checks of the pstat binary: artifacts land where promised, the
// verdicts hold, and identical config + seed gives byte-identical files.

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const char* cli_path() { return PSTAT_CLI_PATH; }

int run_cli(const std::string& args) {
  const std::string cmd = std::string(cli_path()) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("pstat_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("counterexample: verdict artifacts") {
  const fs::path dir = fresh_dir("ce");
  const int rc = run_cli("--output-dir " + dir.string() +
                         " counterexample --eps-ladder 1e-3:1e-1:8");
  CHECK(rc == 0);
  const json verdict = json::parse(slurp(dir / "counterexample_verdict.json"));
  CHECK(verdict.at("pass").get<bool>());
  CHECK(verdict.at("cubic_ratio_within_2pct").get<bool>());
  const std::string csv = slurp(dir / "counterexample.csv");
  CHECK(csv.rfind("eps,D,D_plus_eps_over_eps3,fe2_residual,fe2_residual_over_eps4",
                  0) == 0);
  // header + 8 ladder rows
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 9);
}

TEST_CASE("expand: ladder csv plus slope summary") {
  const fs::path dir = fresh_dir("expand");
  const int rc =
      run_cli("--output-dir " + dir.string() +
              " expand --field fundsol:1.5 --x 1,0 --kind scheme-fe2 --p 1.5");
  CHECK(rc == 0);
  const json summary = json::parse(slurp(dir / "expand_summary.json"));
  CHECK(summary.at("slope_valid").get<bool>());
  CHECK(summary.at("fitted_slope").get<double>() >= 3.5);
  CHECK(summary.at("config").at("kind") == "scheme-fe2");
  const std::string csv = slurp(dir / "expand.csv");
  CHECK(csv.rfind("field,x1,x2,kind,p,eps,residual,normalized_residual", 0) == 0);
}

TEST_CASE("stats: csv rows with quoted field ids") {
  const fs::path dir = fresh_dir("stats");
  const int rc = run_cli("--output-dir " + dir.string() +
                         " stats --field affine:3,-4,2 --center 0,0 --eps 0.5");
  CHECK(rc == 0);
  const std::string csv = slurp(dir / "stats.csv");
  CHECK(csv.find("\"affine:3,-4,2\"") != std::string::npos);
  CHECK(csv.find("midrange") != std::string::npos);
}

TEST_CASE("solve: grid csv and diagnostics from a json config") {
  const fs::path dir = fresh_dir("solve");
  const fs::path cfg_path = dir / "problem.json";
  {
    std::ofstream cfg(cfg_path);
    cfg << json{{"domain",
                 {{"shape", "rectangle"}, {"corners", {0.0, 0.0, 1.0, 1.0}}}},
                {"h", 0.0625},
                {"eps", 0.25},
                {"p", 2.0},
                {"scheme", "fe1"},
                {"samples", 64},
                {"boundary_field", "quad:1,-1"},
                {"tol", 1e-9}}
               .dump();
  }
  const int rc =
      run_cli("--output-dir " + dir.string() + " solve --config " + cfg_path.string());
  CHECK(rc == 0);
  const json diag = json::parse(slurp(dir / "diagnostics.json"));
  CHECK(diag.at("converged").get<bool>());
  CHECK(diag.at("iterations").get<int>() >= 1);
  CHECK(diag.at("config").at("boundary_field") == "quad:1,-1");
  const std::string csv = slurp(dir / "solution.csv");
  CHECK(csv.rfind("x1,x2,value", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 17 * 17);  // all active
}

TEST_CASE("solve: annulus config with the default eps = 4h") {
  const fs::path dir = fresh_dir("solve_annulus");
  const fs::path cfg_path = dir / "problem.json";
  {
    std::ofstream cfg(cfg_path);
    cfg << json{{"domain", {{"shape", "annulus"}, {"r0", 0.5}, {"r1", 1.5}}},
                {"h", 0.0625},
                {"p", 1.5},
                {"scheme", "fe2"},
                {"M", 64},
                {"boundary_field", "fundsol:1.5"},
                {"tol", 1e-7}}
               .dump();
  }
  const int rc =
      run_cli("--output-dir " + dir.string() + " solve --config " + cfg_path.string());
  CHECK(rc == 0);
  const json diag = json::parse(slurp(dir / "diagnostics.json"));
  CHECK(diag.at("converged").get<bool>());
  CHECK(diag.at("config").at("eps").get<double>() == 0.25);
  CHECK(diag.at("config").at("M").get<int>() == 64);
  CHECK(diag.at("monotone_scheme").get<bool>());
  CHECK(diag.at("max_range_violation").get<double>() <= 0.0);
}

TEST_CASE("reproducibility: identical config and seed give identical bytes") {
  const fs::path d1 = fresh_dir("repro1");
  const fs::path d2 = fresh_dir("repro2");
  const std::string args =
      " --seed 42 verify-decomp --field quad:1,2 --field sinexp --points 5";
  CHECK(run_cli("--output-dir " + d1.string() + args) == 0);
  CHECK(run_cli("--output-dir " + d2.string() + args) == 0);
  CHECK(slurp(d1 / "decomp.csv") == slurp(d2 / "decomp.csv"));
  CHECK(slurp(d1 / "decomp_verdict.json") == slurp(d2 / "decomp_verdict.json"));
  const json verdict = json::parse(slurp(d1 / "decomp_verdict.json"));
  CHECK(verdict.at("pass").get<bool>());
  CHECK(verdict.at("config").at("seed").get<int>() == 42);
}

TEST_CASE("json table format") {
  const fs::path dir = fresh_dir("jsonfmt");
  const int rc = run_cli("--output-dir " + dir.string() +
                         " --format json stats --field const:7 --center 0,0 --eps 1");
  CHECK(rc == 0);
  const json rows = json::parse(slurp(dir / "stats.json"));
  REQUIRE(rows.is_array());
  CHECK(rows.size() == 6);
  CHECK(rows[0].at("field") == "const:7");
}

TEST_CASE("usage and validation failures exit nonzero") {
  const fs::path dir = fresh_dir("bad");
  CHECK(run_cli("--output-dir " + dir.string() + " stats --field nosuch") != 0);
  CHECK(run_cli("--output-dir " + dir.string() + " solve --config /nonexistent.json") != 0);
  CHECK(run_cli("--output-dir " + dir.string() + " expand --kind bogus") != 0);
  CHECK(run_cli("") != 0);  // a subcommand is required
}
