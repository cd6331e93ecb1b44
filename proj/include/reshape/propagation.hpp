#pragma once

#include "reshape/envelope.hpp"

#include <optional>
#include <string_view>
#include <vector>

namespace reshape {

/// Split-step scheme: second-order Strang, or the fourth-order symmetric
/// composition of three Strang substeps (three times the work per z step).
enum class Splitting { strang, yoshida4 };

std::string_view to_string(Splitting s) noexcept;
std::optional<Splitting> parse_splitting(std::string_view s) noexcept;

/// Normalized waveguide. Fields are in the pump's co-moving frame; walk-off is
/// the group delay of each band relative to the pump (ps per unit length) and
/// gvd the group-velocity dispersion (ps^2 per unit length). A spectral
/// component at offset frequency f acquires phase (-w * walkoff + gvd * w^2 / 2) z,
/// w = 2 pi f, so a positive walk-off delays the band.
struct WaveguideModel {
  static constexpr int kMinZSteps = 64;

  double length = 1.0;
  double kappa = 1.0;
  double walkoff_signal_ps = 0.0;
  double walkoff_sf_ps = 30.0;
  double gvd_signal_ps2 = 0.0;
  double gvd_sf_ps2 = 0.0;
  double gvd_pump_ps2 = 0.0;
  int z_steps = 256;
  double phase_mismatch = 0.0;
  Splitting splitting = Splitting::yoshida4;

  /// Full check used for configuration: kappa > 0, length > 0, z_steps >= 64.
  void validate() const;

  /// Same model without walk-off or dispersion.
  WaveguideModel without_linear_terms() const;

  bool operator==(const WaveguideModel&) const = default;
};

struct FluxSample {
  double z = 0.0;
  double signal = 0.0;
  double sf = 0.0;
};

struct PropagationResult {
  ComplexEnvelope signal_out;
  ComplexEnvelope sf_out;
  /// Photon-normalized energies at z = 0 and after every step.
  std::vector<FluxSample> photon_flux_trace;
};

/// Undepleted-pump sum-frequency propagation,
///   dA_s/dz = i kappa conj(A_p) A_f + (linear)
///   dA_f/dz = i kappa A_p A_s exp(i dk z) + (linear),
/// with A_p = pump_scale * pump. Symmetric split step: half linear, exact
/// per-sample SU(2) rotation, half linear. The SF field starts at zero.
/// Throws ConfigError on grid mismatch or bad parameters, NumericalError on
/// non-finite fields.
PropagationResult propagate(const ComplexEnvelope& signal_in, const ComplexEnvelope& pump, const WaveguideModel& wg,
                            double pump_scale);

/// CW sum-frequency conversion efficiency sin^2(theta), theta = kappa * |A_p| * L.
double cw_efficiency(double theta) noexcept;

struct SweepPoint {
  double scale = 0.0;
  double sf_fraction = 0.0;
  double signal_fraction = 0.0;
};

/// One propagation per pump scale; fractions are relative to the input
/// signal photon energy. Scales must be non-negative and ascending.
std::vector<SweepPoint> power_sweep(const ComplexEnvelope& signal, const ComplexEnvelope& pump,
                                    const WaveguideModel& wg, const std::vector<double>& scales);

} // namespace reshape
