#pragma once

#include "reshape/comb.hpp"
#include "reshape/envelope.hpp"

#include <vector>

namespace reshape {

/// Throws ConfigError unless the grid window equals the comb period and every
/// line falls on a grid frequency bin (odd line count); AliasingError if the
/// comb reaches the grid Nyquist frequency.
void check_comb_grid(const FrequencyComb& comb, const TimeGrid& grid);

/// Time-domain field of the comb on the grid:
///   E(t) = sum_k w_k exp(2 pi i f_k t), f_k = offset_k * spacing.
ComplexEnvelope synthesize(const FrequencyComb& comb, const TimeGrid& grid);

/// Comb whose line weights are the discrete Fourier coefficients of the target
/// at the line frequencies, so synthesize(fit_comb(x)) is the band-limited
/// projection of x. Carrier and spacing come from the template.
FrequencyComb fit_comb(const ComplexEnvelope& target, const FrequencyComb& comb_template);

/// Circular shift x(t - tau), applied as a linear spectral phase; tau may be
/// any real number of ps.
ComplexEnvelope delay(const ComplexEnvelope& env, double tau_ps);

/// Per-sample phase for reporting, forced to 0 where |E| < fraction * max|E|.
std::vector<double> squelch_phase(const ComplexEnvelope& env, double threshold_fraction = 0.05);

/// Unnormalized forward DFT of the samples.
std::vector<cplx> spectrum(const ComplexEnvelope& env);

} // namespace reshape
