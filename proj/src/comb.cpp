#include "reshape/comb.hpp"

#include "reshape/error.hpp"

#include <cmath>
#include <numbers>

namespace reshape {

double wrap_phase(double phase) noexcept {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double w = std::fmod(phase + std::numbers::pi, two_pi);
  if (w < 0.0)
    w += two_pi;
  w -= std::numbers::pi;
  // fmod rounding can land exactly on +pi
  return w >= std::numbers::pi ? -std::numbers::pi : w;
}

FrequencyComb::FrequencyComb(double carrier_nm, double spacing_ghz, std::vector<CombLine> lines)
    : carrier_nm_(carrier_nm), spacing_ghz_(spacing_ghz), lines_(std::move(lines)) {
  if (!(carrier_nm > 0.0))
    throw ConfigError("comb carrier wavelength must be positive");
  if (!(spacing_ghz > 0.0) || !std::isfinite(spacing_ghz))
    throw ConfigError("comb line spacing must be positive");
  if (lines_.empty())
    throw ConfigError("comb must have at least one line");
  bool any_positive = false;
  for (auto& l : lines_) {
    if (!(l.amplitude >= 0.0) || !std::isfinite(l.amplitude))
      throw ConfigError("comb line amplitudes must be finite and >= 0");
    if (!std::isfinite(l.phase))
      throw ConfigError("comb line phases must be finite");
    l.phase = wrap_phase(l.phase);
    any_positive = any_positive || l.amplitude > 0.0;
  }
  if (!any_positive)
    throw ConfigError("comb needs at least one line with nonzero amplitude");
}

FrequencyComb FrequencyComb::flat(double carrier_nm, std::size_t count, double spacing_ghz, double amplitude) {
  return FrequencyComb(carrier_nm, spacing_ghz, std::vector<CombLine>(count, CombLine{amplitude, 0.0}));
}

FrequencyComb FrequencyComb::from_weights(double carrier_nm, double spacing_ghz, std::span<const cplx> weights) {
  std::vector<CombLine> lines;
  lines.reserve(weights.size());
  for (const auto& w : weights)
    lines.push_back({std::abs(w), std::arg(w)});
  return FrequencyComb(carrier_nm, spacing_ghz, std::move(lines));
}

std::vector<cplx> FrequencyComb::weights() const {
  std::vector<cplx> w(lines_.size());
  for (std::size_t k = 0; k < lines_.size(); ++k)
    w[k] = weight(k);
  return w;
}

FrequencyComb FrequencyComb::scaled(double s) const {
  auto lines = lines_;
  for (auto& l : lines)
    l.amplitude *= s;
  return FrequencyComb(carrier_nm_, spacing_ghz_, std::move(lines));
}

} // namespace reshape
