#include "reshape/waveform.hpp"

#include "reshape/error.hpp"
#include "reshape/fft.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace reshape {
namespace {

long line_index(const FrequencyComb& comb, std::size_t k) {
  return static_cast<long>(k) - static_cast<long>(comb.count() / 2);
}

double sign_of_index(long m) { return (m % 2 == 0) ? 1.0 : -1.0; }

} // namespace

void check_comb_grid(const FrequencyComb& comb, const TimeGrid& grid) {
  const double period = comb.period_ps();
  if (std::abs(grid.window() - period) > 1e-9 * period)
    throw ConfigError("grid window " + std::to_string(grid.window()) + " ps does not match comb period " +
                      std::to_string(period) + " ps");
  if (comb.count() % 2 == 0)
    throw ConfigError("comb line count must be odd so lines fall on grid frequency bins");
  const double half_span_thz = 0.5 * comb.span_ghz() * 1e-3;
  if (!(half_span_thz < grid.nyquist()) || comb.count() >= grid.samples())
    throw AliasingError("comb half-span " + std::to_string(half_span_thz * 1e3) + " GHz reaches grid Nyquist " +
                        std::to_string(grid.nyquist() * 1e3) + " GHz");
}

ComplexEnvelope synthesize(const FrequencyComb& comb, const TimeGrid& grid) {
  check_comb_grid(comb, grid);
  // t_i = (i - N/2) dt, so exp(2 pi i m t_i / W) = (-1)^m exp(2 pi i m i / N).
  std::vector<cplx> x(grid.samples(), cplx{});
  for (std::size_t k = 0; k < comb.count(); ++k) {
    const long m = line_index(comb, k);
    x[grid.bin_of(m)] = comb.weight(k) * sign_of_index(m);
  }
  fft::backward(x);
  return ComplexEnvelope(grid, std::move(x), comb.carrier_nm());
}

FrequencyComb fit_comb(const ComplexEnvelope& target, const FrequencyComb& comb_template) {
  const TimeGrid& grid = target.grid();
  check_comb_grid(comb_template, grid);
  const auto x = spectrum(target);
  const double inv_n = 1.0 / static_cast<double>(grid.samples());
  std::vector<cplx> w(comb_template.count());
  for (std::size_t k = 0; k < w.size(); ++k) {
    const long m = line_index(comb_template, k);
    w[k] = x[grid.bin_of(m)] * (sign_of_index(m) * inv_n);
  }
  return FrequencyComb::from_weights(comb_template.carrier_nm(), comb_template.spacing_ghz(), w);
}

ComplexEnvelope delay(const ComplexEnvelope& env, double tau_ps) {
  const TimeGrid& grid = env.grid();
  auto x = spectrum(env);
  const double inv_n = 1.0 / static_cast<double>(grid.samples());
  for (std::size_t j = 0; j < x.size(); ++j)
    x[j] *= std::polar(inv_n, -2.0 * std::numbers::pi * grid.frequency(j) * tau_ps);
  fft::backward(x);
  return ComplexEnvelope(grid, std::move(x), env.carrier_nm());
}

std::vector<double> squelch_phase(const ComplexEnvelope& env, double threshold_fraction) {
  if (!(threshold_fraction > 0.0 && threshold_fraction < 1.0))
    throw ConfigError("phase squelch threshold must lie in (0, 1)");
  const double cut = threshold_fraction * env.peak_modulus();
  std::vector<double> phase(env.size(), 0.0);
  for (std::size_t i = 0; i < env.size(); ++i)
    if (std::abs(env[i]) >= cut && env[i] != cplx{})
      phase[i] = std::arg(env[i]);
  return phase;
}

std::vector<cplx> spectrum(const ComplexEnvelope& env) {
  std::vector<cplx> x(env.size());
  fft::forward(env.values(), x);
  return x;
}

} // namespace reshape
