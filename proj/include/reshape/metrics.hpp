#pragma once

#include "reshape/envelope.hpp"

#include <optional>
#include <string_view>
#include <vector>

namespace reshape {

/// raw:      V = 2 |<a, b_tau>| / (E_a + E_b)
/// balanced: b is first rescaled to a's energy, V = |<a, b_tau>| / sqrt(E_a E_b)
enum class VisibilityMode { raw, balanced };

std::string_view to_string(VisibilityMode m) noexcept;
std::optional<VisibilityMode> parse_visibility_mode(std::string_view s) noexcept;

/// Fringe contrast of time-integrated interference between a and b delayed by
/// tau (b(t - tau)), under the best global phase. Throws MetricError if either
/// field has zero energy.
double visibility(const ComplexEnvelope& a, const ComplexEnvelope& b, double tau_ps,
                  VisibilityMode mode = VisibilityMode::raw);

struct VisibilityCurve {
  std::vector<double> delays;
  std::vector<double> values;
  double v_max = 0.0;
  double argmax_delay = 0.0;
};

struct ScanRange {
  double from_ps = -25.0;
  double to_ps = 25.0;
  int steps = 101;

  bool operator==(const ScanRange&) const = default;
};

/// Refinement resolution of visibility_scan (ps).
inline constexpr double kScanResolutionPs = 1e-3;

/// Coarse scan over `steps` equally spaced delays, then golden-section
/// refinement around the coarse peak to 1 fs. The refined point is merged into
/// the curve so v_max = max(values).
VisibilityCurve visibility_scan(const ComplexEnvelope& a, const ComplexEnvelope& b, ScanRange range = {},
                                VisibilityMode mode = VisibilityMode::raw);

/// |<a, b>|^2 / (E_a E_b) at zero delay.
double mode_matching(const ComplexEnvelope& a, const ComplexEnvelope& b);
/// Same, with b delayed by tau.
double mode_matching(const ComplexEnvelope& a, const ComplexEnvelope& b, double tau_ps);

struct DelayMatched {
  double eta_mm = 0.0;
  double delay_ps = 0.0;
};

/// Mode matching at the argmax delay of the visibility scan.
DelayMatched mode_matching_max(const ComplexEnvelope& a, const ComplexEnvelope& b, ScanRange range = {});

/// E_r / E_o with energies taken as the area under |E|^2 after subtracting a
/// constant intensity baseline.
double reshape_efficiency(const ComplexEnvelope& reshaped, const ComplexEnvelope& original, double baseline = 0.0);

/// Evaluates <a, b(t - tau)> for arbitrary tau from the two spectra, without
/// re-transforming per delay.
class CrossCorrelator {
public:
  CrossCorrelator(const ComplexEnvelope& a, const ComplexEnvelope& b);

  cplx overlap(double tau_ps) const;
  double energy_a() const noexcept { return energy_a_; }
  double energy_b() const noexcept { return energy_b_; }
  double visibility(double tau_ps, VisibilityMode mode) const;

private:
  TimeGrid grid_;
  std::vector<cplx> weights_; // conj(A_j) B_j dt / N
  double energy_a_;
  double energy_b_;
};

} // namespace reshape
