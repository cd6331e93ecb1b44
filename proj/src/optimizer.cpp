#include "reshape/optimizer.hpp"

#include "reshape/error.hpp"
#include "reshape/waveform.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <numbers>

namespace reshape {

std::string_view to_string(OptimizerMode m) noexcept {
  return m == OptimizerMode::spsa_gradient ? "spsa_gradient" : "greedy_accept";
}

std::string_view to_string(CoordinateMask m) noexcept {
  switch (m) {
  case CoordinateMask::both:
    return "both";
  case CoordinateMask::amplitudes:
    return "amplitudes";
  case CoordinateMask::phases:
    return "phases";
  }
  return "?";
}

std::string_view to_string(StopReason r) noexcept {
  switch (r) {
  case StopReason::target_reached:
    return "target_reached";
  case StopReason::stalled:
    return "stalled";
  case StopReason::max_iters:
    return "max_iters";
  case StopReason::aborted:
    return "aborted";
  }
  return "?";
}

std::optional<OptimizerMode> parse_optimizer_mode(std::string_view s) noexcept {
  if (s == "spsa_gradient")
    return OptimizerMode::spsa_gradient;
  if (s == "greedy_accept")
    return OptimizerMode::greedy_accept;
  return std::nullopt;
}

std::optional<CoordinateMask> parse_coordinate_mask(std::string_view s) noexcept {
  for (auto m : {CoordinateMask::both, CoordinateMask::amplitudes, CoordinateMask::phases})
    if (s == to_string(m))
      return m;
  return std::nullopt;
}

std::optional<StopReason> parse_stop_reason(std::string_view s) noexcept {
  for (auto r : {StopReason::target_reached, StopReason::stalled, StopReason::max_iters, StopReason::aborted})
    if (s == to_string(r))
      return r;
  return std::nullopt;
}

void OptimizerConfig::validate() const {
  if (max_iters < 1)
    throw ConfigError("optimizer max_iters must be >= 1");
  if (max_evaluations < 1)
    throw ConfigError("optimizer max_evaluations must be >= 1");
  if (!(alpha > 0.0 && alpha <= 1.0))
    throw ConfigError("optimizer alpha must lie in (0, 1]");
  if (!(gamma > 0.0 && gamma < alpha))
    throw ConfigError("optimizer gamma must lie in (0, alpha)");
  if (!(a0 >= 0.0) || !std::isfinite(a0))
    throw ConfigError("optimizer a0 must be >= 0");
  if (!(A >= 0.0) || !std::isfinite(A))
    throw ConfigError("optimizer A must be >= 0");
  if (!(c0 > 0.0) || !std::isfinite(c0))
    throw ConfigError("optimizer c0 must be positive");
  if (!(target_vmax > 0.0 && target_vmax <= 1.0))
    throw ConfigError("optimizer target_vmax must lie in (0, 1]");
  if (!(target_eta_mm >= 0.0 && target_eta_mm <= 1.0))
    throw ConfigError("optimizer target_eta_mm must lie in [0, 1]");
  if (stall_window < 1)
    throw ConfigError("optimizer stall_window must be >= 1");
}

double OptimizerConfig::gain(int k) const { return a0 / std::pow(A + k + 1.0, alpha); }
double OptimizerConfig::perturbation(int k) const { return c0 / std::pow(k + 1.0, gamma); }

// ---------------------------------------------------------------------------
// Objective

ObjectiveValue evaluate_pump(const FrequencyComb& pump_comb, const Scenario& scenario) {
  try {
    const auto pump = synthesize(pump_comb, scenario.grid());
    const auto out = propagate(scenario.signal_in, pump, scenario.waveguide, scenario.pump_scale);
    if (!(out.signal_out.energy() > 0.0))
      return {};
    const auto curve = visibility_scan(out.signal_out, scenario.target, scenario.delay_scan, scenario.visibility_mode);
    return {curve.v_max, curve.argmax_delay, mode_matching(out.signal_out, scenario.target, curve.argmax_delay)};
  } catch (const Error& e) {
    std::string lines;
    for (std::size_t k = 0; k < pump_comb.count(); ++k)
      lines += (k ? " " : "") + std::to_string(pump_comb.line(k).amplitude) + "@" +
               std::to_string(pump_comb.line(k).phase);
    throw Error(std::string(e.what()) + " [pump comb: " + lines + "]");
  }
}

double objective(const FrequencyComb& pump_comb, const Scenario& scenario) {
  return evaluate_pump(pump_comb, scenario).v_max;
}

FrequencyComb seed_pump(const Scenario& scenario) {
  const TimeGrid& grid = scenario.grid();
  const auto& s = scenario.signal_in;
  const double e = s.energy();
  double centroid = 0.0, second = 0.0;
  if (e > 0.0) {
    for (std::size_t i = 0; i < s.size(); ++i) {
      const double t = grid.time(i);
      const double p = std::norm(s[i]) * grid.dt() / e;
      centroid += t * p;
      second += t * t * p;
    }
  }
  double sigma = std::sqrt(std::max(second - centroid * centroid, 0.0));
  if (!(sigma > 0.0))
    sigma = 0.1 * grid.window();

  // Intensity rms sigma <=> amplitude exp(-t^2 / (4 sigma^2)); wrap the
  // distance so the pulse is periodic over the window.
  ComplexEnvelope gauss(grid, kPumpNm);
  const double w = grid.window();
  for (std::size_t i = 0; i < grid.samples(); ++i) {
    double d = grid.time(i) - centroid;
    d -= w * std::round(d / w);
    gauss[i] = std::exp(-d * d / (4.0 * sigma * sigma));
  }
  const auto tmpl = FrequencyComb::flat(kPumpNm, scenario.comb_lines, scenario.spacing_ghz);
  const auto fitted = fit_comb(gauss, tmpl);
  const double peak = synthesize(fitted, grid).peak_modulus();
  return fitted.scaled(1.0 / peak);
}

// ---------------------------------------------------------------------------
// Parameter space

std::uint64_t checksum(std::span<const double> params) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (double v : params) {
    unsigned char bytes[sizeof(double)];
    std::memcpy(bytes, &v, sizeof(double));
    for (unsigned char b : bytes) {
      h ^= b;
      h *= 0x100000001b3ull;
    }
  }
  return h;
}

std::vector<double> to_params(const FrequencyComb& comb) {
  const std::size_t k = comb.count();
  std::vector<double> p(2 * k);
  for (std::size_t i = 0; i < k; ++i) {
    p[i] = comb.line(i).amplitude;
    p[k + i] = comb.line(i).phase;
  }
  return p;
}

FrequencyComb from_params(std::span<const double> params, const FrequencyComb& shape_template) {
  const std::size_t k = shape_template.count();
  if (params.size() != 2 * k)
    throw ConfigError("parameter vector length does not match comb line count");
  std::vector<CombLine> lines(k);
  for (std::size_t i = 0; i < k; ++i)
    lines[i] = {params[i], params[k + i]};
  return FrequencyComb(shape_template.carrier_nm(), shape_template.spacing_ghz(), std::move(lines));
}

std::vector<double> draw_direction(std::size_t dim, Rng& rng) {
  std::vector<double> d(dim);
  for (auto& v : d)
    v = (rng() >> 63) ? 1.0 : -1.0;
  return d;
}

std::vector<double> comb_step(std::span<const double> params, std::span<const double> direction, double scale) {
  const std::size_t k = params.size() / 2;
  std::vector<double> out(params.begin(), params.end());
  bool any_positive = false;
  for (std::size_t i = 0; i < k; ++i) {
    out[i] = std::max(0.0, params[i] * (1.0 + scale * direction[i]));
    any_positive = any_positive || out[i] > 0.0;
  }
  if (!any_positive)
    std::copy(params.begin(), params.begin() + static_cast<long>(k), out.begin());
  for (std::size_t i = k; i < 2 * k; ++i)
    out[i] = wrap_phase(params[i] + scale * std::numbers::pi * direction[i]);
  return out;
}

Perturbation perturb(const FrequencyComb& comb, double c_k, Rng& rng) {
  const auto p = to_params(comb);
  auto delta = draw_direction(p.size(), rng);
  return {from_params(comb_step(p, delta, c_k), comb), from_params(comb_step(p, delta, -c_k), comb),
          std::move(delta)};
}

std::vector<double> spsa_gradient(double j_plus, double j_minus, std::span<const double> delta, double c) {
  std::vector<double> g(delta.size(), 0.0);
  for (std::size_t i = 0; i < delta.size(); ++i)
    if (delta[i] != 0.0)
      g[i] = (j_plus - j_minus) / (2.0 * c * delta[i]);
  return g;
}

// ---------------------------------------------------------------------------
// SPSA loop

namespace {

struct LoopState {
  const OptimizerConfig& cfg;
  OptimizationTrace trace;
  int consecutive_failures = 0;
  int last_improvement = 0;

  bool budget_left(int needed) const { return trace.evaluations + needed <= cfg.max_evaluations; }

  bool target_met() const {
    return trace.best.v_max >= cfg.target_vmax && trace.best.eta_mm >= cfg.target_eta_mm;
  }

  std::optional<ObjectiveValue> eval(const SpsaProblem& problem, const std::vector<double>& x, int iteration) {
    ++trace.evaluations;
    try {
      auto v = problem.evaluate(x);
      consecutive_failures = 0;
      return v;
    } catch (const Error& e) {
      ++consecutive_failures;
      trace.failures.push_back("iteration " + std::to_string(iteration) + ": " + e.what());
      return std::nullopt;
    }
  }
};

} // namespace

OptimizationTrace run_spsa(const std::vector<double>& initial, const SpsaProblem& problem,
                           const OptimizerConfig& config) {
  config.validate();
  const std::size_t dim = initial.size();
  std::vector<bool> active = problem.active.empty() ? std::vector<bool>(dim, true) : problem.active;
  if (active.size() != dim)
    throw ConfigError("coordinate mask length does not match parameter count");

  Rng rng(config.seed);
  LoopState st{config, {}, 0, 0};
  st.trace.seed = config.seed;

  std::vector<double> x = initial;
  const auto first = st.eval(problem, x, 0);
  if (!first)
    throw Error("objective failed at the initial point: " + st.trace.failures.back());
  ObjectiveValue current = *first;
  st.trace.best = current;
  st.trace.final_params = x;
  st.trace.records.push_back({0, current.v_max, current.v_max, checksum(x), true});

  auto masked_direction = [&] {
    auto d = draw_direction(dim, rng);
    for (std::size_t i = 0; i < dim; ++i)
      if (!active[i])
        d[i] = 0.0;
    return d;
  };

  st.trace.stop = StopReason::max_iters;
  if (st.target_met()) {
    st.trace.stop = StopReason::target_reached;
    return st.trace;
  }

  for (int k = 0; k < config.max_iters; ++k) {
    const int iteration = k + 1;
    const double ck = config.perturbation(k);
    const auto delta = masked_direction();
    bool improved = false;
    double recorded = std::numeric_limits<double>::quiet_NaN();
    bool accepted = false;

    if (config.mode == OptimizerMode::greedy_accept) {
      if (!st.budget_left(1))
        break;
      auto candidate = problem.step(x, delta, ck);
      if (auto v = st.eval(problem, candidate, iteration)) {
        recorded = v->v_max;
        if (v->v_max > current.v_max) {
          x = std::move(candidate);
          current = *v;
          accepted = improved = true;
        }
      }
    } else {
      if (!st.budget_left(3))
        break;
      const auto plus = problem.step(x, delta, ck);
      const auto minus = problem.step(x, delta, -ck);
      const auto jp = st.eval(problem, plus, iteration);
      const auto jm = st.eval(problem, minus, iteration);
      if (jp && jm) {
        const auto ghat = spsa_gradient(jp->v_max, jm->v_max, delta, ck);
        auto next = problem.step(x, ghat, config.gain(k));
        if (auto v = st.eval(problem, next, iteration)) {
          x = std::move(next);
          current = *v;
          recorded = v->v_max;
          accepted = true;
          improved = v->v_max > st.trace.best.v_max;
        }
      }
    }

    if (improved) {
      st.trace.best = current;
      st.trace.final_params = x;
      st.last_improvement = iteration;
    }
    st.trace.records.push_back({iteration, recorded, st.trace.best.v_max, checksum(x), accepted});

    if (st.consecutive_failures >= 3) {
      st.trace.stop = StopReason::aborted;
      break;
    }
    if (st.target_met()) {
      st.trace.stop = StopReason::target_reached;
      break;
    }
    if (iteration - st.last_improvement >= config.stall_window) {
      st.trace.stop = StopReason::stalled;
      break;
    }
  }
  return st.trace;
}

OptimizationTrace run_spsa(const FrequencyComb& initial, const Scenario& scenario, const OptimizerConfig& config) {
  const std::size_t k = initial.count();
  SpsaProblem problem;
  problem.evaluate = [&](const std::vector<double>& p) { return evaluate_pump(from_params(p, initial), scenario); };
  problem.step = comb_step;
  problem.active.assign(2 * k, true);
  for (std::size_t i = 0; i < k; ++i) {
    problem.active[i] = config.mask != CoordinateMask::phases;
    problem.active[k + i] = config.mask != CoordinateMask::amplitudes;
  }
  auto trace = run_spsa(to_params(initial), problem, config);
  trace.final_comb = from_params(trace.final_params, initial);
  return trace;
}

} // namespace reshape
