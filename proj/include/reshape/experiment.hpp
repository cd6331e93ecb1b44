#pragma once

#include "reshape/config.hpp"
#include "reshape/io.hpp"
#include "reshape/optimizer.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace reshape {

/// Reshaping efficiencies measured on hardware for the four conversions, in
/// the default scenario order. Reported next to the simulated values for
/// context only; they are not simulation targets.
inline constexpr double kMeasuredEtaR[] = {0.896, 0.616, 0.71, 0.845};

/// Builds the optimizer scenario (unit-energy signal and target) for one spec.
Scenario build_scenario(const ExperimentConfig& config, const ScenarioSpec& spec);

/// Grid scan over pump scale x signal delay for a fixed pump comb. The signal
/// is delayed by each delay before propagation; v_max and eta_mm are taken
/// from a visibility scan of the output against the target, eta_r is the
/// output/input signal energy ratio. Points are ordered scale-major.
std::vector<io::ScanPoint> scan_surface(const Scenario& scenario, const FrequencyComb& pump,
                                        const std::vector<double>& scales, const std::vector<double>& delays,
                                        unsigned threads = 0);

/// Scan point maximizing v_max * eta_r (first one on ties).
io::ScanPoint select_operating_point(const std::vector<io::ScanPoint>& scan);

struct ScenarioOutcome {
  ScenarioSpec spec;
  OptimizationTrace trace;
  ObjectiveValue seed_value;
  int attempts_used = 0;
  bool target_met = false;
  std::vector<io::ScanPoint> scan;
  io::ScanPoint operating_point;
};

struct RunOptions {
  std::optional<std::filesystem::path> output_dir; // overrides config.output_dir
  std::optional<std::uint64_t> seed;               // overrides config.optimizer.seed
  unsigned threads = 0;
  bool write_files = true;
};

struct ExperimentReport {
  std::filesystem::path output_dir;
  std::vector<ScenarioOutcome> scenarios;
};

/// Optimizes one scenario, retrying with seed + 1, ... up to config.attempts
/// until the target is met, then scans the surface around the best pump.
ScenarioOutcome run_scenario(const ExperimentConfig& config, const ScenarioSpec& spec, std::uint64_t seed,
                             unsigned threads = 0);

/// Writes comb.json, input.csv, reshaped.csv, target.csv, visibility.csv,
/// scan.csv, trace.csv and summary.json into `dir`.
void write_scenario(const std::filesystem::path& dir, const ExperimentConfig& config, const ScenarioOutcome& outcome,
                    std::size_t index);

/// Runs every scenario and writes per-scenario directories plus a top-level
/// summary.json (written last). Throws ConfigError for an invalid config.
ExperimentReport run_experiment(const ExperimentConfig& config, const RunOptions& options = {});

struct OracleRow {
  double theta = 0.0;
  double simulated = 0.0;
  double expected = 0.0;
  double deviation = 0.0;
};

struct OracleReport {
  std::vector<OracleRow> rows;
  double max_deviation = 0.0;
  double threshold = 1e-6;
  int z_steps = 0;

  bool pass() const noexcept { return max_deviation < threshold; }
};

/// CW sweep of the propagation engine against sin^2(theta) for `points`
/// values of theta in [0, 3 pi / 2], walk-off and dispersion off. Deviation is
/// |simulated - expected| as a fraction of the input signal photon number.
OracleReport oracle_check(int z_steps = 256, int points = 50);

} // namespace reshape
