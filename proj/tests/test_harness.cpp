#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "metashock/errors.hpp"
#include "metashock/harness.hpp"

using namespace metashock;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// The env override must not leak into the out_dir assertions below.
struct EnvGuard {
  EnvGuard() { unsetenv("METASHOCK_OUT"); }
} env_guard;

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "metashock_tests" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string write_config(const fs::path& dir, const std::string& text) {
  const fs::path p = dir / "config.json";
  std::ofstream out(p);
  out << text;
  return p.string();
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(bool(in));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> read_lines(const fs::path& p) {
  std::vector<std::string> lines;
  std::string text = read_file(p);
  std::istringstream ss(text);
  for (std::string line; std::getline(ss, line);) lines.push_back(line);
  return lines;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream ss(line);
  for (std::string cell; std::getline(ss, cell, ',');) out.push_back(cell);
  return out;
}

int count_with_suffix(const fs::path& dir, const std::string& suffix) {
  int k = 0;
  for (const auto& e : fs::directory_iterator(dir)) {
    const std::string name = e.path().filename().string();
    if (name.size() >= suffix.size() &&
        name.compare(name.size() - suffix.size(), suffix.size(), suffix) == 0)
      ++k;
  }
  return k;
}

}  // namespace

TEST_CASE("minimal config picks up documented defaults") {
  const fs::path dir = fresh_dir("defaults");
  const std::string p =
      write_config(dir, R"({"mode": "reduced", "eps": [0.07], "xi0": -0.4})");
  const ExperimentConfig cfg = load_config(p);
  CHECK(cfg.mode == "reduced");
  REQUIRE(cfg.eps.size() == 1);
  CHECK(cfg.eps[0] == 0.07);
  CHECK(cfg.xi0 == -0.4);
  CHECK(cfg.flux == "burgers");
  CHECK(cfg.n == 800);
  CHECK(cfg.cfl == 0.45);
  CHECK(cfg.tmax == 10.0);
  CHECK(cfg.theta == "asymptotic");
  CHECK(cfg.u0_name == "quadratic");
  CHECK(cfg.threads == 1);
  CHECK(cfg.out_dir == "out");
  CHECK_FALSE(cfg.full_pde_long);

  const std::string scalar = write_config(dir, R"({"mode": "steady", "eps": 0.05})");
  CHECK(load_config(scalar).eps == std::vector<double>{0.05});
}

TEST_CASE("config loading rejects malformed or inconsistent input") {
  const fs::path dir = fresh_dir("badconfig");

  CHECK_THROWS_AS(load_config((dir / "missing.json").string()), ConfigError);

  const std::string bad = write_config(dir, "{\n  \"mode\": \"steady\",\n  eps: 0.1\n}");
  try {
    load_config(bad);
    FAIL("expected a parse failure");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }

  auto expect_validation = [&](const std::string& text, const std::string& needle) {
    const std::string p = write_config(dir, text);
    try {
      load_config(p);
      FAIL("expected rejection of " << text);
    } catch (const ValidationError& e) {
      CHECK(std::string(e.what()).find(needle) != std::string::npos);
    }
  };
  expect_validation(R"({"mode": "reduced", "eps": [-0.1]})", "eps must be positive");
  expect_validation(R"({"mode": "orbit"})", "mode must be one of");
  expect_validation(R"({"mode": "steady", "epz": 1})", "unknown config field: epz");
  expect_validation(R"({"mode": "spectrum", "n": 2000})", "at most 1200");
  expect_validation(R"({"mode": "evolve", "cfl": 0.9})", "cfl must lie in (0, 0.45]");
  expect_validation(R"({"mode": "evolve", "u0": "bump"})", "u0 must be");
  expect_validation(R"({"mode": "steady", "n": 1.5})", "n must be an integer");
  expect_validation(R"({"mode": "steady", "xi": 1.0})", "xi must lie strictly inside");
  expect_validation(R"(["steady"])", "config root must be a JSON object");

  const std::string flux = write_config(dir, R"({"mode": "steady", "flux": "cubic"})");
  CHECK_THROWS_AS(load_config(flux), InvalidFluxError);
}

TEST_CASE("steady mode commits its outputs and reports them in the manifest") {
  const fs::path dir = fresh_dir("steady_run");
  ExperimentConfig cfg;
  cfg.mode = "steady";
  cfg.eps = {0.1, 0.05};
  cfg.n = 200;
  cfg.xi = -0.3;
  cfg.out_dir = dir.string();

  const RunManifest mf = run(cfg);
  CHECK(mf.ok);
  CHECK(mf.config_hash.size() == 16);
  CHECK_FALSE(mf.version.empty());
  REQUIRE(mf.runs.size() == 2);
  CHECK(mf.runs[0].name == "steady_eps0.1");
  CHECK(mf.runs[1].name == "steady_eps0.05");
  for (const auto& rec : mf.runs) {
    CHECK(rec.error.empty());
    REQUIRE(rec.files.size() == 2);
    for (const auto& f : rec.files) {
      CHECK(fs::exists(f));
      CHECK(fs::file_size(f) > 0);
    }
  }
  CHECK(count_with_suffix(dir, ".tmp") == 0);
  CHECK(count_with_suffix(dir, ".partial") == 0);

  const auto lines = read_lines(dir / "steady_eps0.1.csv");
  REQUIRE(lines.size() == 201);  // header + n interior nodes
  CHECK(lines[0] == "x,u,v,p1_smooth,p2");
  CHECK(split_csv(lines[1]).size() == 5);
  // rows cover the interior nodes, where the residual operators are defined
  const double x_first = std::stod(split_csv(lines[1])[0]);
  CHECK(x_first == doctest::Approx(-1.0 + 2.0 / 201.0).epsilon(1e-9));

  const json side = json::parse(read_file(dir / "steady_eps0.1.json"));
  CHECK(side["eps"] == 0.1);
  CHECK(side["xi"] == -0.3);
  CHECK(side.contains("k_minus"));
  CHECK(side.contains("jump_dxu"));
  CHECK(side.contains("omega1_asymptotic"));
  CHECK(side.contains("under_resolved"));

  const json man = json::parse(read_file(dir / "manifest.json"));
  CHECK(man["ok"] == true);
  CHECK(man["config_hash"] == mf.config_hash);
  CHECK(man["runs"].size() == 2);
  CHECK(man["runs"][0]["error"] == "");
}

TEST_CASE("evolve mode streams samples and writes requested snapshots") {
  const fs::path dir = fresh_dir("evolve_run");
  ExperimentConfig cfg;
  cfg.mode = "evolve";
  cfg.eps = {0.1};
  cfg.n = 100;
  cfg.tmax = 0.5;
  cfg.sample_times = {0.2};
  cfg.snapshot_times = {0.5};
  cfg.out_dir = dir.string();

  const RunManifest mf = run(cfg);
  REQUIRE(mf.ok);
  REQUIRE(mf.runs.size() == 1);
  REQUIRE(mf.runs[0].files.size() == 2);

  const auto trace = read_lines(dir / "evolve_eps0.1.csv");
  REQUIRE(trace.size() == 3);  // header + t=0.2 + t=tmax
  CHECK(trace[0] == "t,xi_zero,xi_vmin,ynorm");
  CHECK(split_csv(trace[1])[0] == "0.2");
  CHECK(split_csv(trace[2])[0] == "0.5");
  const double xi02 = std::stod(split_csv(trace[1])[1]);
  CHECK(xi02 < -0.3);
  CHECK(xi02 > -0.5);

  const auto snap = read_lines(dir / "state_eps0.1_t0.5.csv");
  REQUIRE(snap.size() == 103);  // header + n+2 nodes
  CHECK(snap[0] == "x,u,v");
  CHECK(split_csv(snap[1])[0] == "-1");
  CHECK(split_csv(snap[102])[0] == "1");
}

TEST_CASE("a blown-up run leaves a partial trace and a failing manifest") {
  const fs::path dir = fresh_dir("blowup_run");
  ExperimentConfig cfg;
  cfg.mode = "evolve";
  cfg.eps = {0.05};
  cfg.n = 200;
  cfg.tmax = 5.0;
  cfg.sample_times = {0.2, 1.0};
  // tall wall-consistent bump: the true wave speed dwarfs a=1 and the
  // explicit transport overflows within a few steps
  cfg.u0_coeffs = {99.5, -1.0, -199.5, 0.0, 100.0};
  cfg.out_dir = dir.string();

  const RunManifest mf = run(cfg);
  CHECK_FALSE(mf.ok);
  REQUIRE(mf.runs.size() == 1);
  CHECK(mf.runs[0].error.find("non-finite") != std::string::npos);
  CHECK(mf.runs[0].files.empty());
  CHECK_FALSE(fs::exists(dir / "evolve_eps0.05.csv"));
  CHECK(fs::exists(dir / "evolve_eps0.05.csv.partial"));
  CHECK(count_with_suffix(dir, ".tmp") == 0);

  const json man = json::parse(read_file(dir / "manifest.json"));
  CHECK(man["ok"] == false);
  CHECK(man["runs"][0]["error"] != "");
}

TEST_CASE("repeat runs are byte-identical and threads do not change results") {
  ExperimentConfig cfg;
  cfg.mode = "asymptotics";
  cfg.eps = {0.1, 0.07, 0.05};
  cfg.xi = -0.35;

  const fs::path a = fresh_dir("det_a");
  const fs::path b = fresh_dir("det_b");
  const fs::path c = fresh_dir("det_c");
  cfg.out_dir = a.string();
  REQUIRE(run(cfg).ok);
  cfg.out_dir = b.string();
  REQUIRE(run(cfg).ok);
  cfg.out_dir = c.string();
  cfg.threads = 2;
  REQUIRE(run(cfg).ok);

  for (const char* eps : {"0.1", "0.07", "0.05"}) {
    for (const char* ext : {".csv", ".json"}) {
      const std::string name = std::string("asymptotics_eps") + eps + ext;
      const std::string ref = read_file(a / name);
      CHECK(ref == read_file(b / name));
      CHECK(ref == read_file(c / name));
      CHECK_FALSE(ref.empty());
    }
  }
}

TEST_CASE("output directory override comes from the environment") {
  const fs::path dir = fresh_dir("env_override");
  ExperimentConfig cfg;
  cfg.mode = "asymptotics";
  cfg.eps = {0.1};
  cfg.out_dir = (dir / "ignored").string();
  setenv("METASHOCK_OUT", (dir / "actual").string().c_str(), 1);
  const RunManifest mf = run(cfg);
  unsetenv("METASHOCK_OUT");
  CHECK(mf.ok);
  CHECK(fs::exists(dir / "actual" / "manifest.json"));
  CHECK_FALSE(fs::exists(dir / "ignored"));
}

TEST_CASE("table mode chains the reduced model beyond the grid horizon") {
  const fs::path dir = fresh_dir("table_run");
  ExperimentConfig cfg;
  cfg.mode = "table-repro";
  cfg.n = 150;
  cfg.pde_tmax = 2.0;
  cfg.out_dir = dir.string();

  const RunManifest mf = run(cfg);
  REQUIRE(mf.ok);
  REQUIRE(mf.runs.size() == 1);
  CHECK(mf.runs[0].name == "table-repro");

  const ReferenceTable& ref = reference_table();
  const auto lines = read_lines(dir / "table_comparison.csv");
  REQUIRE(lines.size() == 1 + ref.eps_values.size() * ref.t_values.size());
  CHECK(lines[0] == "eps,t,xi_ref,xi_ours,abs_diff");

  for (std::size_t j = 0; j < ref.eps_values.size(); ++j) {
    double prev_abs = 1.0;
    for (std::size_t i = 0; i < ref.t_values.size(); ++i) {
      const auto row = split_csv(lines[1 + j * ref.t_values.size() + i]);
      REQUIRE(row.size() == 5);
      CHECK(std::stod(row[0]) == doctest::Approx(ref.eps_values[j]).epsilon(1e-12));
      CHECK(std::stod(row[1]) == doctest::Approx(ref.t_values[i]).epsilon(1e-12));
      CHECK(std::stod(row[2]) == doctest::Approx(ref.xi[i][j]).epsilon(1e-9));
      const double ours = std::stod(row[3]);
      CHECK(std::isfinite(ours));
      CHECK(ours <= 0.0);
      CHECK(std::stod(row[4]) ==
            doctest::Approx(std::abs(ours - ref.xi[i][j])).epsilon(1e-9));
      // the layer only creeps toward the center, never away from it
      CHECK(std::abs(ours) <= prev_abs + 1e-12);
      prev_abs = std::abs(ours);
    }
  }
  // the PDE phase is accurate where the reference is well resolved
  CHECK(std::stod(split_csv(lines[1])[3]) == doctest::Approx(-0.4008).epsilon(0.05));
}

TEST_CASE("reference dataset is the frozen shock-position table") {
  const ReferenceTable& t = reference_table();
  CHECK(t.version == "shock-table-v1");
  REQUIRE(t.eps_values == std::vector<double>{0.1, 0.07, 0.055, 0.04, 0.02});
  REQUIRE(t.t_values == std::vector<double>{0.2, 1.0, 10.0, 1e3, 1e4, 0.5e6});
  REQUIRE(t.xi.size() == 6);
  for (const auto& row : t.xi) REQUIRE(row.size() == 5);
  CHECK(t.xi[0][0] == -0.4008);
  CHECK(t.xi[2][4] == -0.3326);
  CHECK(t.xi[4][0] == -1.9725e-12);
  CHECK(t.xi[5][4] == -0.3099);
}
