#include "reshape/grid.hpp"

#include "reshape/error.hpp"

#include <bit>
#include <cmath>
#include <string>

namespace reshape {

TimeGrid::TimeGrid(double window_ps, std::size_t samples) : window_(window_ps), samples_(samples) {
  if (!(window_ps > 0.0) || !std::isfinite(window_ps))
    throw ConfigError("time grid window must be positive and finite");
  if (samples < kMinSamples || !std::has_single_bit(samples))
    throw ConfigError("time grid samples must be a power of two >= 256, got " + std::to_string(samples));
}

TimeGrid TimeGrid::for_comb(double spacing_ghz, std::size_t samples) {
  if (!(spacing_ghz > 0.0))
    throw ConfigError("comb line spacing must be positive");
  return TimeGrid(1e3 / spacing_ghz, samples);
}

std::vector<double> TimeGrid::times() const {
  std::vector<double> t(samples_);
  for (std::size_t i = 0; i < samples_; ++i)
    t[i] = time(i);
  return t;
}

std::vector<double> TimeGrid::frequencies() const {
  std::vector<double> f(samples_);
  for (std::size_t j = 0; j < samples_; ++j)
    f[j] = frequency(j);
  return f;
}

} // namespace reshape
