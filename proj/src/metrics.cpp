#include "reshape/metrics.hpp"

#include "reshape/error.hpp"
#include "reshape/kernels.hpp"
#include "reshape/waveform.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace reshape {

std::string_view to_string(VisibilityMode m) noexcept { return m == VisibilityMode::raw ? "raw" : "balanced"; }

std::optional<VisibilityMode> parse_visibility_mode(std::string_view s) noexcept {
  if (s == "raw")
    return VisibilityMode::raw;
  if (s == "balanced")
    return VisibilityMode::balanced;
  return std::nullopt;
}

namespace {

void require_energy(double e, const char* which) {
  if (!(e > 0.0))
    throw MetricError(std::string("metric undefined: ") + which + " has zero energy");
}

double visibility_from(double overlap_mod, double ea, double eb, VisibilityMode mode) {
  const double v = mode == VisibilityMode::raw ? 2.0 * overlap_mod / (ea + eb) : overlap_mod / std::sqrt(ea * eb);
  return std::min(v, 1.0);
}

// exp(-2 pi i m tau / W) for every bin. Powers of the unit phasor are built by
// recurrence and re-anchored every 32 steps to bound rounding drift.
void fill_phasor(const TimeGrid& grid, double tau_ps, std::vector<cplx>& p) {
  const std::size_t n = grid.samples();
  const std::size_t half = n / 2;
  const double step_angle = -2.0 * std::numbers::pi * tau_ps / grid.window();
  const cplx w = std::polar(1.0, step_angle);
  p.resize(n);
  cplx cur{1.0, 0.0};
  for (std::size_t m = 0; m <= half; ++m) {
    if (m % 32 == 0)
      cur = std::polar(1.0, step_angle * static_cast<double>(m));
    if (m < half)
      p[m] = cur;
    if (m > 0)
      p[n - m] = std::conj(cur);
    cur *= w;
  }
}

} // namespace

CrossCorrelator::CrossCorrelator(const ComplexEnvelope& a, const ComplexEnvelope& b)
    : grid_(a.grid()), energy_a_(a.energy()), energy_b_(b.energy()) {
  require_same_grid(a, b, "cross-correlation");
  auto sa = spectrum(a);
  auto sb = spectrum(b);
  const double scale = grid_.dt() / static_cast<double>(grid_.samples());
  weights_.resize(sa.size());
  for (std::size_t j = 0; j < sa.size(); ++j)
    weights_[j] = std::conj(sa[j]) * sb[j] * scale;
}

cplx CrossCorrelator::overlap(double tau_ps) const {
  thread_local std::vector<cplx> phasor;
  fill_phasor(grid_, tau_ps, phasor);
  return kernels::dot(weights_, phasor);
}

double CrossCorrelator::visibility(double tau_ps, VisibilityMode mode) const {
  require_energy(energy_a_, "first field");
  require_energy(energy_b_, "second field");
  return visibility_from(std::abs(overlap(tau_ps)), energy_a_, energy_b_, mode);
}

double visibility(const ComplexEnvelope& a, const ComplexEnvelope& b, double tau_ps, VisibilityMode mode) {
  require_same_grid(a, b, "visibility");
  const double ea = a.energy(), eb = b.energy();
  require_energy(ea, "first field");
  require_energy(eb, "second field");
  const double ov = tau_ps == 0.0 ? std::abs(overlap(a, b)) : std::abs(overlap(a, delay(b, tau_ps)));
  return visibility_from(ov, ea, eb, mode);
}

VisibilityCurve visibility_scan(const ComplexEnvelope& a, const ComplexEnvelope& b, ScanRange range,
                                VisibilityMode mode) {
  if (range.steps < 3)
    throw ConfigError("visibility scan needs at least 3 delay steps");
  if (!(range.to_ps > range.from_ps))
    throw ConfigError("visibility scan range must be ascending");
  const CrossCorrelator xc(a, b);
  require_energy(xc.energy_a(), "first field");
  require_energy(xc.energy_b(), "second field");

  const auto steps = static_cast<std::size_t>(range.steps);
  const double step = (range.to_ps - range.from_ps) / static_cast<double>(steps - 1);
  VisibilityCurve curve;
  curve.delays.resize(steps);
  curve.values.resize(steps);
  std::size_t best = 0;
  for (std::size_t i = 0; i < steps; ++i) {
    curve.delays[i] = i + 1 == steps ? range.to_ps : range.from_ps + step * static_cast<double>(i);
    curve.values[i] = xc.visibility(curve.delays[i], mode);
    if (curve.values[i] > curve.values[best])
      best = i;
  }

  // Golden-section refinement on the bracket around the coarse peak.
  double lo = curve.delays[best > 0 ? best - 1 : 0];
  double hi = curve.delays[std::min(best + 1, steps - 1)];
  const double inv_phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - inv_phi * (hi - lo), x2 = lo + inv_phi * (hi - lo);
  double f1 = xc.visibility(x1, mode), f2 = xc.visibility(x2, mode);
  while (hi - lo > kScanResolutionPs) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = xc.visibility(x2, mode);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = xc.visibility(x1, mode);
    }
  }
  const double tau_ref = f1 >= f2 ? x1 : x2;
  const double v_ref = std::max(f1, f2);

  curve.v_max = curve.values[best];
  curve.argmax_delay = curve.delays[best];
  if (v_ref > curve.v_max) {
    auto pos = std::lower_bound(curve.delays.begin(), curve.delays.end(), tau_ref);
    const auto idx = pos - curve.delays.begin();
    curve.delays.insert(pos, tau_ref);
    curve.values.insert(curve.values.begin() + idx, v_ref);
    curve.v_max = v_ref;
    curve.argmax_delay = tau_ref;
  }
  return curve;
}

double mode_matching(const ComplexEnvelope& a, const ComplexEnvelope& b) {
  require_same_grid(a, b, "mode_matching");
  const double ea = a.energy(), eb = b.energy();
  require_energy(ea, "first field");
  require_energy(eb, "second field");
  return std::min(std::norm(overlap(a, b)) / (ea * eb), 1.0);
}

double mode_matching(const ComplexEnvelope& a, const ComplexEnvelope& b, double tau_ps) {
  return tau_ps == 0.0 ? mode_matching(a, b) : mode_matching(a, delay(b, tau_ps));
}

DelayMatched mode_matching_max(const ComplexEnvelope& a, const ComplexEnvelope& b, ScanRange range) {
  const auto curve = visibility_scan(a, b, range, VisibilityMode::balanced);
  return {mode_matching(a, b, curve.argmax_delay), curve.argmax_delay};
}

double reshape_efficiency(const ComplexEnvelope& reshaped, const ComplexEnvelope& original, double baseline) {
  require_same_grid(reshaped, original, "reshape_efficiency");
  const double dt = original.grid().dt();
  const double span = baseline * static_cast<double>(original.size()) * dt;
  const double e_o = original.energy() - span;
  const double e_r = reshaped.energy() - span;
  if (!(e_o > 0.0))
    throw MetricError("reshape efficiency undefined: original pulse has no energy above baseline");
  return e_r / e_o;
}

} // namespace reshape
