#pragma once

#include <cstddef>
#include <vector>

namespace reshape {

/// Uniform sampling of one comb period. Sample i sits at
/// t_i = (i - samples/2) * dt, so t = 0 is the window center.
/// Frequencies are in THz when times are in ps.
class TimeGrid {
public:
  static constexpr std::size_t kMinSamples = 256;

  /// Throws ConfigError unless samples is a power of two >= 256 and window > 0.
  TimeGrid(double window_ps, std::size_t samples);

  /// Grid whose window equals the period of a comb with the given spacing.
  static TimeGrid for_comb(double spacing_ghz, std::size_t samples = 1024);

  double window() const noexcept { return window_; }
  std::size_t samples() const noexcept { return samples_; }
  double dt() const noexcept { return window_ / static_cast<double>(samples_); }
  double df() const noexcept { return 1.0 / window_; }
  double nyquist() const noexcept { return static_cast<double>(samples_) / (2.0 * window_); }

  double time(std::size_t i) const noexcept {
    return (static_cast<double>(i) - static_cast<double>(samples_ / 2)) * dt();
  }

  /// Signed frequency index of FFT bin j, in [-samples/2, samples/2).
  long bin_index(std::size_t j) const noexcept {
    const auto n = static_cast<long>(samples_);
    const auto jj = static_cast<long>(j);
    return jj < n / 2 ? jj : jj - n;
  }

  /// Frequency of FFT bin j (THz).
  double frequency(std::size_t j) const noexcept { return static_cast<double>(bin_index(j)) * df(); }

  /// FFT bin holding signed frequency index m.
  std::size_t bin_of(long m) const noexcept {
    const auto n = static_cast<long>(samples_);
    return static_cast<std::size_t>(((m % n) + n) % n);
  }

  std::vector<double> times() const;
  std::vector<double> frequencies() const;

  bool operator==(const TimeGrid&) const = default;

private:
  double window_;
  std::size_t samples_;
};

} // namespace reshape
