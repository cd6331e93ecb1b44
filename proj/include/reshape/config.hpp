#pragma once

#include "reshape/metrics.hpp"
#include "reshape/optimizer.hpp"
#include "reshape/propagation.hpp"
#include "reshape/signals.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace reshape {

inline constexpr const char* kExperimentSchema = "reshape-experiment/1";

struct ScanAxis {
  double from = 0.0;
  double to = 0.0;
  int points = 1;

  /// Evenly spaced values, endpoints included.
  std::vector<double> values() const;

  bool operator==(const ScanAxis&) const = default;
};

struct ScenarioSpec {
  std::string name;
  ShapeTag input = ShapeTag::S1;
  ShapeTag target = ShapeTag::S2;
  double pump_scale = 3.141592653589793;
  double target_vmax = 0.99;
  double target_eta_mm = 0.99;
  /// Multiples of pump_scale.
  ScanAxis scale_scan{0.8, 1.2, 21};
  /// Signal delay relative to the pump (ps).
  ScanAxis delay_scan{-5.0, 5.0, 51};
  /// Perturbation gain override for this scenario.
  std::optional<double> c0;

  bool operator==(const ScenarioSpec&) const = default;
};

/// Scenario with the default thresholds for its target (0.97 and no mode
/// matching gate for Se targets, 0.99 / 0.99 otherwise).
ScenarioSpec make_scenario(ShapeTag input, ShapeTag target, double pump_scale);

struct ExperimentConfig {
  double window_ps = 50.0;
  std::size_t samples = 1024;

  std::size_t comb_lines = FrequencyComb::kDefaultLines;
  double spacing_ghz = FrequencyComb::kDefaultSpacingGHz;
  double pump_carrier_nm = kPumpNm;
  double signal_carrier_nm = kSignalNm;

  SignalShape s1 = SignalShape::s1();
  SignalShape s2 = SignalShape::s2();
  SignalShape se = SignalShape::se();

  WaveguideModel waveguide{};
  OptimizerConfig optimizer{};
  /// Seeds tried per scenario (seed, seed + 1, ...) until the target is reached.
  int attempts = 3;

  VisibilityMode visibility_mode = VisibilityMode::balanced;
  ScanRange visibility_scan{};

  std::vector<ScenarioSpec> scenarios;
  std::string output_dir = "reshape-out";
  double phase_squelch = 0.05;

  /// The four reshaping conversions with tuned pump scales.
  static ExperimentConfig defaults();

  TimeGrid grid() const { return TimeGrid(window_ps, samples); }
  const SignalShape& shape(ShapeTag tag) const;

  bool operator==(const ExperimentConfig&) const = default;
};

struct Diagnostic {
  std::string field; // JSON pointer, e.g. "/shapes/Se/tau_ps"
  std::string message;
  int line = 0; // 1-based; 0 when not tied to a text position
  int column = 0;

  std::string to_string() const;
};

struct ParseResult {
  std::optional<ExperimentConfig> config;
  std::vector<Diagnostic> diagnostics;

  bool ok() const noexcept { return config.has_value() && diagnostics.empty(); }
};

/// Parses and fully validates a config document. Missing fields take their
/// defaults; unknown fields are reported.
ParseResult parse_config(const std::string& text);

/// Invariant checks on an in-memory config.
std::vector<Diagnostic> check_config(const ExperimentConfig& config);

std::string serialize_config(const ExperimentConfig& config);

/// Reads and checks a config file without running anything. Throws Error if
/// the file cannot be read.
std::vector<Diagnostic> validate_config(const std::filesystem::path& path);

} // namespace reshape
