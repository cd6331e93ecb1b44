#include "reshape/signals.hpp"

#include "reshape/error.hpp"

#include <cmath>

namespace reshape {

std::string_view to_string(ShapeTag tag) noexcept {
  switch (tag) {
  case ShapeTag::S1:
    return "S1";
  case ShapeTag::S2:
    return "S2";
  case ShapeTag::Se:
    return "Se";
  }
  return "?";
}

std::optional<ShapeTag> parse_shape_tag(std::string_view s) noexcept {
  if (s == "S1")
    return ShapeTag::S1;
  if (s == "S2")
    return ShapeTag::S2;
  if (s == "Se")
    return ShapeTag::Se;
  return std::nullopt;
}

void SignalShape::validate() const {
  switch (tag) {
  case ShapeTag::S1:
  case ShapeTag::S2:
    if (!(mode_width_ps > 0.0) || !std::isfinite(mode_width_ps))
      throw ConfigError("mode_width_ps must be positive");
    break;
  case ShapeTag::Se:
    if (!(rise_ps > 0.0) || !std::isfinite(rise_ps))
      throw ConfigError("rise_ps must be positive");
    if (!(tau_ps > 0.0) || !std::isfinite(tau_ps))
      throw ConfigError("tau_ps must be positive");
    if (!std::isfinite(onset_ps))
      throw ConfigError("onset_ps must be finite");
    break;
  }
}

double SignalShape::value(double t) const noexcept {
  switch (tag) {
  case ShapeTag::S1:
    return std::exp(-t * t / (2.0 * mode_width_ps * mode_width_ps));
  case ShapeTag::S2:
    return (t / mode_width_ps) * std::exp(-t * t / (2.0 * mode_width_ps * mode_width_ps));
  case ShapeTag::Se:
    if (t < onset_ps)
      return 0.0;
    if (t < onset_ps + rise_ps)
      return (t - onset_ps) / rise_ps;
    return std::exp(-(t - onset_ps - rise_ps) / tau_ps);
  }
  return 0.0;
}

double outside_energy_fraction(const SignalShape& shape, const TimeGrid& grid) {
  // Sample three windows at the grid resolution; the middle one is the grid.
  const double dt = grid.dt();
  const double half = 0.5 * grid.window();
  const long n = static_cast<long>(grid.samples());
  double inside = 0.0, outside = 0.0;
  for (long i = -n - n / 2; i < n + n / 2; ++i) {
    const double t = static_cast<double>(i) * dt;
    const double v = shape.value(t);
    (t >= -half && t < half ? inside : outside) += v * v;
  }
  // Tails beyond the extended range, in closed form for Se.
  if (shape.tag == ShapeTag::Se) {
    const double t_end = static_cast<double>(n + n / 2) * dt;
    const double x = (t_end - shape.onset_ps - shape.rise_ps) / shape.tau_ps;
    if (x > 0.0)
      outside += std::exp(-2.0 * x) * shape.tau_ps / (2.0 * dt);
  }
  const double total = inside + outside;
  return total > 0.0 ? outside / total : 0.0;
}

ComplexEnvelope make_signal(const SignalShape& shape, const TimeGrid& grid) {
  shape.validate();
  const double frac = outside_energy_fraction(shape, grid);
  if (frac > kTruncationTolerance)
    throw TruncationError(std::string(to_string(shape.tag)) + " pulse does not fit the " +
                          std::to_string(grid.window()) + " ps window (energy fraction outside " +
                          std::to_string(frac) + ")");
  // Comb-synthesized pulses repeat every window, so sample the periodized
  // shape (nearest images suffice once truncation has been checked).
  ComplexEnvelope env(grid, kSignalNm);
  const double w = grid.window();
  for (std::size_t i = 0; i < grid.samples(); ++i) {
    const double t = grid.time(i);
    env[i] = shape.value(t - w) + shape.value(t) + shape.value(t + w);
  }
  const double e = env.energy();
  if (!(e > 0.0))
    throw TruncationError(std::string(to_string(shape.tag)) + " pulse has no energy inside the window");
  env *= 1.0 / std::sqrt(e);
  return env;
}

double intensity_fwhm(const ComplexEnvelope& env) {
  const std::size_t n = env.size();
  std::size_t peak = 0;
  double pmax = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (std::norm(env[i]) > pmax) {
      pmax = std::norm(env[i]);
      peak = i;
    }
  }
  if (pmax == 0.0)
    return 0.0;
  const double half = 0.5 * pmax;
  const double dt = env.grid().dt();
  auto crossing = [&](int dir) {
    long i = static_cast<long>(peak);
    while (true) {
      const long j = i + dir;
      if (j < 0 || j >= static_cast<long>(n))
        return static_cast<double>(i);
      const double pi = std::norm(env[static_cast<std::size_t>(i)]);
      const double pj = std::norm(env[static_cast<std::size_t>(j)]);
      if (pj < half)
        return static_cast<double>(i) + dir * (pi - half) / (pi - pj);
      i = j;
    }
  };
  return (crossing(+1) - crossing(-1)) * dt;
}

} // namespace reshape
