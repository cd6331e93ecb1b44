#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace reshape {

using cplx = std::complex<double>;

/// Wraps an angle to [-pi, pi).
double wrap_phase(double phase) noexcept;

struct CombLine {
  double amplitude = 0.0;
  double phase = 0.0;

  bool operator==(const CombLine&) const = default;
};

/// Equally spaced comb lines about a carrier. Line k sits at
/// carrier + (k - (count-1)/2) * spacing. Amplitudes are >= 0 with at least
/// one strictly positive; phases are kept wrapped to [-pi, pi).
class FrequencyComb {
public:
  static constexpr std::size_t kDefaultLines = 17;
  static constexpr double kDefaultSpacingGHz = 20.0;

  /// Throws ConfigError if the invariants above do not hold.
  FrequencyComb(double carrier_nm, double spacing_ghz, std::vector<CombLine> lines);

  /// Uniform comb: every line at the given amplitude with zero phase.
  static FrequencyComb flat(double carrier_nm, std::size_t count = kDefaultLines,
                            double spacing_ghz = kDefaultSpacingGHz, double amplitude = 1.0);

  /// Builds from complex line weights (amplitude = |w|, phase = arg w).
  static FrequencyComb from_weights(double carrier_nm, double spacing_ghz, std::span<const cplx> weights);

  double carrier_nm() const noexcept { return carrier_nm_; }
  double spacing_ghz() const noexcept { return spacing_ghz_; }
  std::size_t count() const noexcept { return lines_.size(); }
  const std::vector<CombLine>& lines() const noexcept { return lines_; }
  const CombLine& line(std::size_t k) const { return lines_.at(k); }

  cplx weight(std::size_t k) const { return std::polar(lines_.at(k).amplitude, lines_.at(k).phase); }
  std::vector<cplx> weights() const;

  /// Offset of line k from the carrier in units of the spacing (half-integer for even counts).
  double offset(std::size_t k) const noexcept {
    return static_cast<double>(k) - 0.5 * static_cast<double>(lines_.size() - 1);
  }
  /// Offset of line k from the carrier in THz.
  double offset_thz(std::size_t k) const noexcept { return offset(k) * spacing_ghz_ * 1e-3; }
  /// Distance between outermost lines (GHz).
  double span_ghz() const noexcept { return static_cast<double>(lines_.size() - 1) * spacing_ghz_; }
  double period_ps() const noexcept { return 1e3 / spacing_ghz_; }

  /// Same comb with every amplitude multiplied by s (s > 0).
  FrequencyComb scaled(double s) const;

  bool operator==(const FrequencyComb&) const = default;

private:
  double carrier_nm_;
  double spacing_ghz_;
  std::vector<CombLine> lines_;
};

} // namespace reshape
