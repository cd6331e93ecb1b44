#pragma once

#include "reshape/comb.hpp"
#include "reshape/envelope.hpp"
#include "reshape/metrics.hpp"
#include "reshape/propagation.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace reshape {

/// One reshaping problem: which input is sent through the waveguide and which
/// pulse the output should interfere with.
struct Scenario {
  ComplexEnvelope signal_in;
  ComplexEnvelope target;
  WaveguideModel waveguide;
  double pump_scale = 3.141592653589793;
  ScanRange delay_scan{};
  VisibilityMode visibility_mode = VisibilityMode::balanced;
  std::size_t comb_lines = FrequencyComb::kDefaultLines;
  double spacing_ghz = FrequencyComb::kDefaultSpacingGHz;

  const TimeGrid& grid() const noexcept { return signal_in.grid(); }
};

struct ObjectiveValue {
  double v_max = 0.0;
  double argmax_delay = 0.0;
  double eta_mm = 0.0;
};

/// synthesize pump -> propagate -> visibility scan against the target.
/// Propagation errors are rethrown with the candidate comb described.
ObjectiveValue evaluate_pump(const FrequencyComb& pump_comb, const Scenario& scenario);
/// v_max of evaluate_pump.
double objective(const FrequencyComb& pump_comb, const Scenario& scenario);

/// Transform-limited Gaussian pump matched to the input signal's intensity
/// centroid and rms duration, normalized so the synthesized peak modulus is 1.
FrequencyComb seed_pump(const Scenario& scenario);

enum class OptimizerMode { spsa_gradient, greedy_accept };
enum class CoordinateMask { both, amplitudes, phases };
enum class StopReason { target_reached, stalled, max_iters, aborted };

std::string_view to_string(OptimizerMode m) noexcept;
std::string_view to_string(CoordinateMask m) noexcept;
std::string_view to_string(StopReason r) noexcept;
std::optional<OptimizerMode> parse_optimizer_mode(std::string_view s) noexcept;
std::optional<CoordinateMask> parse_coordinate_mask(std::string_view s) noexcept;
std::optional<StopReason> parse_stop_reason(std::string_view s) noexcept;

/// Gains a_k = a0 / (A + k + 1)^alpha and c_k = c0 / (k + 1)^gamma.
struct OptimizerConfig {
  OptimizerMode mode = OptimizerMode::greedy_accept;
  int max_iters = 5000;
  int max_evaluations = 5000;
  double a0 = 0.05;
  double A = 100.0;
  double alpha = 0.602;
  double c0 = 0.05;
  double gamma = 0.101;
  std::uint64_t seed = 1;
  double target_vmax = 0.99;
  double target_eta_mm = 0.99;
  int stall_window = 300;
  CoordinateMask mask = CoordinateMask::both;

  /// Throws ConfigError naming the first violated invariant.
  void validate() const;

  double gain(int k) const;
  double perturbation(int k) const;

  bool operator==(const OptimizerConfig&) const = default;
};

/// Generator identifier recorded in every trace.
inline constexpr std::string_view kRngAlgorithm = "mt19937_64";
using Rng = std::mt19937_64;

struct TraceRecord {
  int iteration = 0;
  double objective = 0.0;
  double vmax_so_far = 0.0;
  std::uint64_t checksum = 0;
  bool accepted = false;
};

struct OptimizationTrace {
  std::vector<TraceRecord> records;
  std::vector<double> final_params;
  std::optional<FrequencyComb> final_comb;
  ObjectiveValue best;
  StopReason stop = StopReason::max_iters;
  int evaluations = 0;
  std::uint64_t seed = 0;
  std::string rng{kRngAlgorithm};
  std::vector<std::string> failures;
};

/// FNV-1a over the bytes of the parameter vector.
std::uint64_t checksum(std::span<const double> params) noexcept;

/// Comb parameter vector: amplitudes then phases.
std::vector<double> to_params(const FrequencyComb& comb);
FrequencyComb from_params(std::span<const double> params, const FrequencyComb& shape_template);

/// Bernoulli +-1 direction, one draw per coordinate (high bit of the generator output).
std::vector<double> draw_direction(std::size_t dim, Rng& rng);

/// Moves a comb parameter vector by `scale` along `direction`: amplitudes
/// multiplicatively a (1 + s d) clamped at 0, phases additively phi + s pi d
/// wrapped to [-pi, pi). If every amplitude would reach zero the amplitudes
/// are left unchanged.
std::vector<double> comb_step(std::span<const double> params, std::span<const double> direction, double scale);

struct Perturbation {
  FrequencyComb plus;
  FrequencyComb minus;
  std::vector<double> delta;
};

/// Simultaneous perturbation of all 2K comb coordinates by +-c_k.
Perturbation perturb(const FrequencyComb& comb, double c_k, Rng& rng);

/// Simultaneous-perturbation gradient from a two-sided difference:
///   g_i = (j_plus - j_minus) / (2 c delta_i), 0 where delta_i = 0.
std::vector<double> spsa_gradient(double j_plus, double j_minus, std::span<const double> delta, double c);

/// Objective-agnostic problem description used by the SPSA loop.
struct SpsaProblem {
  std::function<ObjectiveValue(const std::vector<double>&)> evaluate;
  std::function<std::vector<double>(std::span<const double>, std::span<const double>, double)> step;
  std::vector<bool> active;
};

/// Maximizes problem.evaluate from `initial`. Evaluation errors are recorded in
/// the trace; three consecutive failures abort the run.
OptimizationTrace run_spsa(const std::vector<double>& initial, const SpsaProblem& problem,
                           const OptimizerConfig& config);

/// Comb optimization for a reshaping scenario; final_comb is the best comb found.
OptimizationTrace run_spsa(const FrequencyComb& initial, const Scenario& scenario, const OptimizerConfig& config);

} // namespace reshape
