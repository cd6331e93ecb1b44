#include "reshape/config.hpp"
#include "reshape/error.hpp"
#include "reshape/experiment.hpp"
#include "reshape/io.hpp"

#include <doctest.h>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <numbers>

using namespace reshape;
namespace fs = std::filesystem;

namespace {

// One quick scenario with a tiny budget and a 3 x 3 scan.
ExperimentConfig small_config() {
  auto c = ExperimentConfig::defaults();
  c.scenarios = {c.scenarios[1]};
  c.scenarios[0].scale_scan = {0.9, 1.1, 3};
  c.scenarios[0].delay_scan = {-1.0, 1.0, 3};
  c.optimizer.max_evaluations = 30;
  c.attempts = 2;
  return c;
}

fs::path fresh_dir(const std::string& name) {
  const auto d = fs::temp_directory_path() / "reshape-test-experiment" / name;
  fs::remove_all(d);
  return d;
}

} // namespace

TEST_CASE("oracle check") {
  const auto r = oracle_check();
  CHECK(r.pass());
  REQUIRE(r.rows.size() == 50);
  CHECK(r.rows.front().theta == 0.0);
  CHECK(r.rows.front().deviation == 0.0);
  CHECK(r.rows.back().theta == doctest::Approx(1.5 * std::numbers::pi));
  for (const auto& row : r.rows)
    CHECK(row.expected == doctest::Approx(std::pow(std::sin(row.theta), 2)).epsilon(1e-12));
}

TEST_CASE("operating point selection") {
  CHECK_THROWS_AS(select_operating_point({}), Error);
  const std::vector<io::ScanPoint> s = {
      {1.0, 0.0, 0.99, 0.98, 0.5}, {1.0, 1.0, 0.9, 0.81, 0.8}, {2.0, 0.0, 0.8, 0.64, 0.9}, {2.0, 1.0, 0.9, 0.81, 0.8}};
  const auto p = select_operating_point(s);
  // 0.9 * 0.8 = 0.72 beats 0.495 and 0.72 (tie goes to the first).
  CHECK(p.pump_scale == 1.0);
  CHECK(p.delay_ps == 1.0);
}

TEST_CASE("scan surface") {
  const auto cfg = small_config();
  const auto sc = build_scenario(cfg, cfg.scenarios[0]);
  const auto pump = seed_pump(sc);
  const auto scan = scan_surface(sc, pump, {0.0, sc.pump_scale}, {-1.0, 0.0, 1.0}, 2);
  REQUIRE(scan.size() == 6);
  for (std::size_t i = 0; i < 3; ++i) {
    // Pump off: the signal passes untouched.
    CHECK(scan[i].eta_r == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(scan[i].pump_scale == 0.0);
  }
  CHECK(scan[4].delay_ps == 0.0);
  CHECK(scan[4].v_max == doctest::Approx(evaluate_pump(pump, sc).v_max).epsilon(1e-12));
  const auto serial = scan_surface(sc, pump, {0.0, sc.pump_scale}, {-1.0, 0.0, 1.0}, 1);
  for (std::size_t i = 0; i < scan.size(); ++i)
    CHECK(serial[i].v_max == scan[i].v_max);
}

TEST_CASE("empty experiment writes only the summary") {
  auto c = ExperimentConfig::defaults();
  c.scenarios.clear();
  const auto dir = fresh_dir("empty");
  const auto r = run_experiment(c, {dir, std::nullopt, 1, true});
  CHECK(r.scenarios.empty());
  const auto j = nlohmann::json::parse(io::read_text(dir / "summary.json"));
  CHECK(j["scenario_count"] == 0);
  CHECK(j["scenarios"].empty());
  CHECK(j["note"] == "no scenarios configured");
}

TEST_CASE("invalid config is rejected before running") {
  auto c = small_config();
  c.se.tau_ps = -1.0;
  CHECK_THROWS_AS(run_experiment(c, {fresh_dir("bad"), std::nullopt, 1, false}), ConfigError);
}

TEST_CASE("runs are reproducible byte for byte") {
  const auto cfg = small_config();
  const auto a = fresh_dir("a"), b = fresh_dir("b");
  const auto ra = run_experiment(cfg, {a, 5, 2, true});
  run_experiment(cfg, {b, 5, 1, true});

  REQUIRE(ra.scenarios.size() == 1);
  const auto& o = ra.scenarios[0];
  CHECK(o.scan.size() == 9);
  CHECK(o.trace.evaluations <= 30);
  CHECK(o.trace.best.v_max >= o.seed_value.v_max);
  CHECK(o.attempts_used >= 1);
  CHECK(o.attempts_used <= 2);

  const std::string sub = "01_" + cfg.scenarios[0].name;
  for (const char* f : {"comb.json", "input.csv", "reshaped.csv", "target.csv", "visibility.csv", "scan.csv",
                        "trace.csv", "summary.json"}) {
    CAPTURE(f);
    REQUIRE(fs::exists(a / sub / f));
    CHECK(io::read_text(a / sub / f) == io::read_text(b / sub / f));
  }
  CHECK(io::read_text(a / "summary.json") == io::read_text(b / "summary.json"));

  const auto s = nlohmann::json::parse(io::read_text(a / sub / "summary.json"));
  CHECK(s["seed"].get<std::uint64_t>() >= 5);
  CHECK(s["rng"] == "mt19937_64");
  CHECK(s["measured_eta_r"]["value"] == kMeasuredEtaR[1]);
  CHECK(io::read_comb(a / sub / "comb.json") == *o.trace.final_comb);
  CHECK(io::read_scan(a / sub / "scan.csv").size() == 9);
}
