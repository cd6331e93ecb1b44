#pragma once

#include "reshape/envelope.hpp"

#include <optional>
#include <string>
#include <string_view>

namespace reshape {

enum class ShapeTag { S1, S2, Se };

std::string_view to_string(ShapeTag tag) noexcept;
std::optional<ShapeTag> parse_shape_tag(std::string_view s) noexcept;

/// Mode width giving a 10 ps intensity FWHM for S1: FWHM = 2 sqrt(ln 2) T0.
inline constexpr double kDefaultModeWidthPs = 6.0056120439322491;

/// Named signal pulse.
///   S1: exp(-t^2 / (2 T0^2))                      (Hermite-Gauss order 0)
///   S2: (t / T0) exp(-t^2 / (2 T0^2))             (Hermite-Gauss order 1)
///   Se: 0 before onset, linear ramp over `rise`, then exp(-(t - onset - rise) / tau)
/// Times are relative to the window center.
struct SignalShape {
  ShapeTag tag = ShapeTag::S1;
  double mode_width_ps = kDefaultModeWidthPs; // S1, S2
  double rise_ps = 5.0;                       // Se
  double tau_ps = 5.0;                        // Se
  double onset_ps = 0.0;                      // Se

  static SignalShape s1(double mode_width_ps = kDefaultModeWidthPs) { return {ShapeTag::S1, mode_width_ps}; }
  static SignalShape s2(double mode_width_ps = kDefaultModeWidthPs) { return {ShapeTag::S2, mode_width_ps}; }
  static SignalShape se(double rise_ps = 5.0, double tau_ps = 5.0, double onset_ps = 0.0) {
    return {ShapeTag::Se, kDefaultModeWidthPs, rise_ps, tau_ps, onset_ps};
  }

  /// Throws ConfigError naming the offending parameter.
  void validate() const;

  /// Unnormalized analytic amplitude at time t (ps).
  double value(double t) const noexcept;

  bool operator==(const SignalShape&) const = default;
};

/// Largest energy fraction allowed outside the window before make_signal
/// reports truncation.
inline constexpr double kTruncationTolerance = 1e-3;

/// Fraction of the analytic pulse energy lying outside one grid window.
double outside_energy_fraction(const SignalShape& shape, const TimeGrid& grid);

/// Samples the shape on the grid and normalizes it to unit energy.
/// Throws TruncationError if the pulse does not fit in the window.
ComplexEnvelope make_signal(const SignalShape& shape, const TimeGrid& grid);

/// Intensity full width at half maximum of a sampled envelope (ps), with
/// linear interpolation at the crossings.
double intensity_fwhm(const ComplexEnvelope& env);

} // namespace reshape
