#include "reshape/propagation.hpp"

#include "reshape/error.hpp"
#include "reshape/fft.hpp"
#include "reshape/kernels.hpp"
#include "reshape/waveform.hpp"

#include <cmath>
#include <numbers>
#include <optional>
#include <string>

namespace reshape {

std::string_view to_string(Splitting s) noexcept { return s == Splitting::strang ? "strang" : "yoshida4"; }

std::optional<Splitting> parse_splitting(std::string_view s) noexcept {
  if (s == "strang")
    return Splitting::strang;
  if (s == "yoshida4")
    return Splitting::yoshida4;
  return std::nullopt;
}

void WaveguideModel::validate() const {
  if (!(kappa > 0.0) || !std::isfinite(kappa))
    throw ConfigError("waveguide kappa must be positive");
  if (!(length > 0.0) || !std::isfinite(length))
    throw ConfigError("waveguide length must be positive");
  if (z_steps < kMinZSteps)
    throw ConfigError("waveguide z_steps must be >= " + std::to_string(kMinZSteps));
  for (double v : {walkoff_signal_ps, walkoff_sf_ps, gvd_signal_ps2, gvd_sf_ps2, gvd_pump_ps2, phase_mismatch})
    if (!std::isfinite(v))
      throw ConfigError("waveguide walk-off, dispersion and phase mismatch must be finite");
}

WaveguideModel WaveguideModel::without_linear_terms() const {
  WaveguideModel wg = *this;
  wg.walkoff_signal_ps = wg.walkoff_sf_ps = 0.0;
  wg.gvd_signal_ps2 = wg.gvd_sf_ps2 = wg.gvd_pump_ps2 = 0.0;
  return wg;
}

namespace {

// Spectral multiplier for a linear step of length h, with the 1/N of the
// inverse transform folded in. Empty when the step is the identity.
std::optional<std::vector<cplx>> linear_step(const TimeGrid& grid, double walkoff, double gvd, double extra_phase,
                                             double h) {
  if (walkoff == 0.0 && gvd == 0.0 && extra_phase == 0.0)
    return std::nullopt;
  const double inv_n = 1.0 / static_cast<double>(grid.samples());
  std::vector<cplx> m(grid.samples());
  for (std::size_t j = 0; j < m.size(); ++j) {
    const double w = 2.0 * std::numbers::pi * grid.frequency(j);
    m[j] = std::polar(inv_n, (-w * walkoff + 0.5 * gvd * w * w + extra_phase) * h);
  }
  return m;
}

void apply_linear(std::vector<cplx>& x, const std::optional<std::vector<cplx>>& m) {
  if (!m)
    return;
  fft::forward(x);
  kernels::mul_inplace(x, *m);
  fft::backward(x);
}

void rotation_coefficients(std::span<const cplx> pump, double strength, std::vector<double>& c, std::vector<cplx>& g) {
  for (std::size_t i = 0; i < pump.size(); ++i) {
    const double r = std::abs(pump[i]);
    const double theta = strength * r;
    c[i] = std::cos(theta);
    g[i] = r > 0.0 ? cplx{0.0, std::sin(theta)} * (pump[i] / r) : cplx{};
  }
}

} // namespace

namespace {

// Substep weights of one z step. Strang is a single symmetric step; the
// fourth-order scheme is Yoshida's triple composition of Strang steps.
std::vector<double> substep_weights(Splitting scheme) {
  if (scheme == Splitting::strang)
    return {1.0};
  const double cbrt2 = std::cbrt(2.0);
  const double w1 = 1.0 / (2.0 - cbrt2);
  return {w1, -cbrt2 * w1, w1};
}

} // namespace

PropagationResult propagate(const ComplexEnvelope& signal_in, const ComplexEnvelope& pump, const WaveguideModel& wg,
                            double pump_scale) {
  require_same_grid(signal_in, pump, "propagate");
  if (!(pump_scale >= 0.0) || !std::isfinite(pump_scale))
    throw ConfigError("pump_scale must be finite and >= 0");
  if (!(wg.kappa > 0.0) || !(wg.length > 0.0) || wg.z_steps < 1)
    throw ConfigError("waveguide needs kappa > 0, length > 0 and at least one z step");

  const TimeGrid& grid = signal_in.grid();
  const std::size_t n = grid.samples();
  const int steps = wg.z_steps;
  const double dz = wg.length / steps;
  const double dt = grid.dt();
  const auto weights = substep_weights(wg.splitting);
  const std::size_t subs = weights.size();

  // Linear sections: before substep j the half-steps of j-1 and j merge; the
  // section between two z steps joins the last and first substeps.
  std::vector<double> sections(subs + 1);
  sections[0] = 0.5 * weights[0];
  for (std::size_t j = 1; j < subs; ++j)
    sections[j] = 0.5 * (weights[j - 1] + weights[j]);
  sections[subs] = 0.5 * weights[subs - 1];
  const double joint = 0.5 * (weights[subs - 1] + weights[0]);

  // The SF field is carried as A_f exp(-i dk z), which moves the mismatch into
  // its linear step.
  struct Linear {
    std::optional<std::vector<cplx>> sig, sf;
  };
  auto make_linear = [&](double frac) {
    return Linear{linear_step(grid, wg.walkoff_signal_ps, wg.gvd_signal_ps2, 0.0, frac * dz),
                  linear_step(grid, wg.walkoff_sf_ps, wg.gvd_sf_ps2, -wg.phase_mismatch, frac * dz)};
  };
  std::vector<Linear> inner;
  for (std::size_t j = 1; j < subs; ++j)
    inner.push_back(make_linear(sections[j]));
  const Linear first = make_linear(sections[0]);
  const Linear between = make_linear(joint);
  const Linear final_section = make_linear(sections[subs]);

  std::vector<cplx> a(signal_in.values().begin(), signal_in.values().end());
  std::vector<cplx> b(n, cplx{});

  const double strength = wg.kappa * pump_scale * dz;
  const bool pump_evolves = wg.gvd_pump_ps2 != 0.0 && pump_scale > 0.0;
  // One coefficient set per substep (equal weights share storage).
  std::vector<std::vector<double>> c(subs, std::vector<double>(n));
  std::vector<std::vector<cplx>> g(subs, std::vector<cplx>(n));
  std::vector<cplx> pump_spectrum, pump_z;
  if (pump_evolves) {
    pump_spectrum = spectrum(pump);
    pump_z.resize(n);
  } else {
    for (std::size_t j = 0; j < subs; ++j)
      rotation_coefficients(pump.values(), strength * weights[j], c[j], g[j]);
  }

  PropagationResult result{ComplexEnvelope(grid, signal_in.carrier_nm()), ComplexEnvelope(grid, kSumNm), {}};
  result.photon_flux_trace.reserve(static_cast<std::size_t>(steps) + 1);
  result.photon_flux_trace.push_back({0.0, kernels::norm2(a) * dt, 0.0});

  const double inv_n = 1.0 / static_cast<double>(n);
  apply_linear(a, first.sig);
  for (int s = 0; s < steps; ++s) {
    double z_sub = s * dz;
    for (std::size_t j = 0; j < subs; ++j) {
      if (j > 0) {
        apply_linear(a, inner[j - 1].sig);
        apply_linear(b, inner[j - 1].sf);
      }
      if (pump_evolves) {
        const double z_mid = z_sub + 0.5 * weights[j] * dz;
        for (std::size_t k = 0; k < n; ++k) {
          const double w = 2.0 * std::numbers::pi * grid.frequency(k);
          pump_z[k] = pump_spectrum[k] * std::polar(inv_n, 0.5 * wg.gvd_pump_ps2 * w * w * z_mid);
        }
        fft::backward(pump_z);
        rotation_coefficients(pump_z, strength * weights[j], c[j], g[j]);
      }
      kernels::rotate(a, b, c[j], g[j]);
      z_sub += weights[j] * dz;
    }

    const double z = (s + 1) * dz;
    const double es = kernels::norm2(a) * dt;
    const double ef = kernels::norm2(b) * dt;
    if (!std::isfinite(es) || !std::isfinite(ef))
      throw NumericalError("non-finite field during propagation", z);
    result.photon_flux_trace.push_back({z, es, ef});

    const Linear& next = s + 1 == steps ? final_section : between;
    apply_linear(a, next.sig);
    apply_linear(b, next.sf);
  }

  if (wg.phase_mismatch != 0.0) {
    const cplx back = std::polar(1.0, wg.phase_mismatch * wg.length);
    for (auto& v : b)
      v *= back;
  }
  std::copy(a.begin(), a.end(), result.signal_out.values().begin());
  std::copy(b.begin(), b.end(), result.sf_out.values().begin());
  return result;
}

double cw_efficiency(double theta) noexcept {
  const double s = std::sin(theta);
  return s * s;
}

std::vector<SweepPoint> power_sweep(const ComplexEnvelope& signal, const ComplexEnvelope& pump,
                                    const WaveguideModel& wg, const std::vector<double>& scales) {
  for (std::size_t i = 0; i < scales.size(); ++i) {
    if (!(scales[i] >= 0.0))
      throw ConfigError("power sweep scales must be non-negative");
    if (i > 0 && !(scales[i] > scales[i - 1]))
      throw ConfigError("power sweep scales must be ascending");
  }
  const double e_in = signal.energy();
  if (!(e_in > 0.0))
    throw MetricError("power sweep needs a signal with nonzero energy");

  std::vector<SweepPoint> out;
  out.reserve(scales.size());
  for (double s : scales) {
    try {
      const auto r = propagate(signal, pump, wg, s);
      out.push_back({s, r.sf_out.energy() / e_in, r.signal_out.energy() / e_in});
    } catch (const NumericalError& e) {
      throw NumericalError(std::string(e.what()) + " at pump scale " + std::to_string(s), e.z());
    } catch (const Error& e) {
      throw Error(std::string(e.what()) + " at pump scale " + std::to_string(s));
    }
  }
  return out;
}

} // namespace reshape
