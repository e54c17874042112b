#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "uflow/commands.hpp"
#include "uflow/csv.hpp"

using namespace uflow;
namespace fs = std::filesystem;

namespace {

std::string kBaseConfig = R"({
  "potential": {"kind": "log-cosh", "params": []},
  "r": 2.0,
  "grid": {"R": 12.0, "n": 801},
  "truncation": {"k": 12.0},
  "initial": {"kind": "tilt", "params": [0.3, 1.0, 0.0], "c": 0.5, "C": 2.0},
  "solver": {"t_end": 3.0, "diag_every": 0.1, "safety": 0.4},
  "verify": {"random_audit_count": 5, "seed": 42},
  "output": {"directory": "out"}
})";

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct TempDir {
  fs::path path;
  TempDir(const std::string& tag) {
    path = fs::temp_directory_path() / ("uflow_test_" + tag);
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("config parses and round-trips") {
  RunConfig cfg = parse_config_json(kBaseConfig);
  CHECK(cfg.potential_kind == PotentialKind::LogCosh);
  CHECK(cfg.grid_n == 801);
  CHECK(cfg.t_end == doctest::Approx(3.0));
  CHECK(cfg.seed == 42);
  RunConfig again = parse_config_json(cfg.to_json());
  CHECK(again.hash() == cfg.hash());
  CHECK(again.to_json() == cfg.to_json());
}

TEST_CASE("config validation names the offending field") {
  std::string bad = kBaseConfig;
  auto pos = bad.find("801");
  bad.replace(pos, 3, "800");
  try {
    parse_config_json(bad);
    FAIL("expected a config error");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("grid.n") != std::string::npos);
  }
}

TEST_CASE("config rejects a bad cone ordering") {
  std::string bad = kBaseConfig;
  auto pos = bad.find("\"c\": 0.5");
  bad.replace(pos, 8, "\"c\": 3.0");
  CHECK_THROWS_AS(parse_config_json(bad), ConfigError);
}

TEST_CASE("initial datum outside the cone is a domain error naming the check") {
  RunConfig cfg = parse_config_json(kBaseConfig);
  cfg.initial_params = {0.95, 1.0, 0.0};  // tilt too large for [0.5, 2]
  auto model = build_equilibrium(make_spec(cfg), Grid::make(cfg.grid_R, cfg.grid_n));
  try {
    make_initial(cfg, model);
    FAIL("expected a cone failure");
  } catch (const DomainError& e) {
    CHECK(std::string(e.what()).find("cone") != std::string::npos);
  }
}

TEST_CASE("bimodal and translate initial data stay in a wide cone") {
  RunConfig cfg = parse_config_json(kBaseConfig);
  cfg.cone_c = 0.2;
  cfg.cone_C = 5.0;
  auto model = build_equilibrium(make_spec(cfg), Grid::make(cfg.grid_R, cfg.grid_n));
  cfg.initial_kind = "bimodal";
  cfg.initial_params = {};
  GridDensity b = make_initial(cfg, model);
  CHECK(std::abs(b.mass() - 1.0) < 1e-10);
  cfg.initial_kind = "translate";
  cfg.initial_params = {0.3};
  GridDensity t = make_initial(cfg, model);
  CHECK(std::abs(t.mass() - 1.0) < 1e-10);
}

TEST_CASE("fmt17 round-trips doubles") {
  for (double v : {1.0 / 3.0, 2.718281828459045, 1e-300, -0.1}) {
    CHECK(std::stod(fmt17(v)) == v);
  }
}

TEST_CASE("csv writer emits header rows and metadata") {
  TempDir tmp("csv");
  fs::path p = tmp.path / "t.csv";
  {
    CsvWriter w(p.string(), {"a", "b"});
    w.row({"1", "2"});
    w.meta("config_hash", "deadbeef");
  }
  std::string text = slurp(p);
  CHECK(text.find("a,b\n") == 0);
  CHECK(text.find("1,2\n") != std::string::npos);
  CHECK(text.find("# config_hash=deadbeef") != std::string::npos);
}

TEST_CASE("cmd_run produces artifacts and exits zero") {
  TempDir tmp("run");
  RunConfig cfg = parse_config_json(kBaseConfig);
  cfg.output_dir = (tmp.path / "run1").string();
  CHECK(cmd_run(cfg) == kExitOk);
  for (const char* name :
       {"trajectory.csv", "reports.csv", "decay.csv", "ledger.txt",
        "ledger.csv", "config_resolved.json", "decay.svg", "slack.svg"}) {
    CHECK(fs::exists(fs::path(cfg.output_dir) / name));
  }
  std::string traj = slurp(fs::path(cfg.output_dir) / "trajectory.csv");
  CHECK(traj.find("t,F,F_gap,I,L2sq,W2_to_m,mass,u_min,u_max,dt") == 0);
  std::string ledger = slurp(fs::path(cfg.output_dir) / "ledger.txt");
  CHECK(ledger.find("K_epe=") != std::string::npos);
  CHECK(ledger.find("a_fit=") != std::string::npos);
}

TEST_CASE("cmd_run is byte-deterministic") {
  TempDir tmp("det");
  RunConfig cfg = parse_config_json(kBaseConfig);
  cfg.output_dir = (tmp.path / "a").string();
  REQUIRE(cmd_run(cfg) == kExitOk);
  cfg.output_dir = (tmp.path / "b").string();
  REQUIRE(cmd_run(cfg) == kExitOk);
  for (const char* name : {"trajectory.csv", "reports.csv", "decay.csv"}) {
    CHECK(slurp(tmp.path / "a" / name) == slurp(tmp.path / "b" / name));
  }
}

TEST_CASE("cmd_verify with a seed is deterministic and passes") {
  TempDir tmp("verify");
  RunConfig cfg = parse_config_json(kBaseConfig);
  cfg.random_audit_count = 8;
  cfg.output_dir = (tmp.path / "v1").string();
  CHECK(cmd_verify(cfg) == kExitOk);
  cfg.output_dir = (tmp.path / "v2").string();
  CHECK(cmd_verify(cfg) == kExitOk);
  CHECK(slurp(tmp.path / "v1" / "reports.csv") ==
        slurp(tmp.path / "v2" / "reports.csv"));
  std::string reports = slurp(tmp.path / "v1" / "reports.csv");
  CHECK(reports.find("fail") == std::string::npos);
}

TEST_CASE("cmd_verify with zero audits writes a header-only report") {
  TempDir tmp("verify0");
  RunConfig cfg = parse_config_json(kBaseConfig);
  cfg.random_audit_count = 0;
  cfg.output_dir = (tmp.path / "v").string();
  CHECK(cmd_verify(cfg) == kExitOk);
  std::string reports = slurp(tmp.path / "v" / "reports.csv");
  CHECK(reports.find("name,lhs,rhs,slack,pass") == 0);
}

TEST_CASE("cmd_sweep writes per-value directories and a summary") {
  TempDir tmp("sweep");
  RunConfig cfg = parse_config_json(kBaseConfig);
  cfg.grid_n = 601;
  cfg.grid_R = 10.0;
  cfg.truncation_k = 10.0;
  cfg.t_end = 2.0;
  cfg.output_dir = (tmp.path / "s").string();
  CHECK(cmd_sweep(cfg, "r", {1.5, 2.0}) == kExitOk);
  CHECK(fs::exists(tmp.path / "s" / "summary.csv"));
  std::string summary = slurp(tmp.path / "s" / "summary.csv");
  CHECK(summary.find("value,a_fit,K_epe") == 0);
  int rows = 0;
  for (char ch : summary)
    if (ch == '\n') ++rows;
  CHECK(rows >= 3);  // header + 2 values (+ metadata)
}

TEST_CASE("cmd_sweep rejects an empty value list and unknown parameters") {
  RunConfig cfg = parse_config_json(kBaseConfig);
  TempDir tmp("sweepbad");
  cfg.output_dir = (tmp.path / "s").string();
  CHECK(cmd_sweep(cfg, "r", {}) == kExitConfig);
  CHECK(cmd_sweep(cfg, "bogus", {1.0}) == kExitConfig);
}

TEST_CASE("file-based initial datum loads from csv") {
  TempDir tmp("file");
  RunConfig cfg = parse_config_json(kBaseConfig);
  auto model = build_equilibrium(make_spec(cfg), Grid::make(cfg.grid_R, cfg.grid_n));
  fs::path p = tmp.path / "init.csv";
  {
    std::ofstream out(p);
    out << "x,f\n";
    const Grid& g = model.grid();
    for (int i = 0; i < g.n; i += 4)
      out << fmt17(g.nodes[i]) << "," << fmt17(model.m()[i]) << "\n";
  }
  cfg.initial_kind = "file";
  cfg.initial_file = p.string();
  GridDensity f = make_initial(cfg, model);
  // subsampled input re-interpolates to within the constructor's 1e-8 band
  CHECK(std::abs(f.mass() - 1.0) < 2e-8);
  ConeBounds cb = cone_measure(f, model.m());
  CHECK(cb.c > 0.9);
  CHECK(cb.C < 1.1);
}
