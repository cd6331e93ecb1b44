// Acceptance run: one PASS/FAIL line per criterion, 1 through 8.
// Exit status is 0 when the failures are exactly the known limitations listed
// in kKnownFailures, so a new regression or an unexpected pass both show up.

#include "reshape/config.hpp"
#include "reshape/experiment.hpp"
#include "reshape/metrics.hpp"
#include "reshape/optimizer.hpp"
#include "reshape/propagation.hpp"
#include "reshape/signals.hpp"
#include "reshape/waveform.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>

using namespace reshape;

namespace {

constexpr double pi = std::numbers::pi;

// Criteria that cannot hold for the defined shapes and draw budget; the
// README explains why.
const std::set<int> kKnownFailures = {6, 8};

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), f, args...);
  return buf;
}

const TimeGrid& grid() {
  static const TimeGrid g = TimeGrid::for_comb(20.0, 1024);
  return g;
}

ComplexEnvelope random_comb_field(std::mt19937_64& rng, double carrier) {
  std::uniform_real_distribution<double> a(0.0, 1.0), p(-pi, pi);
  std::vector<CombLine> l(17);
  for (auto& x : l)
    x = {a(rng), p(rng)};
  return synthesize(FrequencyComb(carrier, 20.0, l), grid());
}

ComplexEnvelope constant(const TimeGrid& g, double carrier) {
  return ComplexEnvelope(g, std::vector<cplx>(g.samples(), cplx(1.0, 0.0)), carrier);
}

Outcome cw_oracle() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto r = oracle_check(256, 50);
  const double secs = seconds_since(t0);
  double rel = 0.0;
  for (const auto& row : r.rows)
    rel = std::max(rel, row.expected > 0.0 ? row.deviation / row.expected : row.deviation);
  return {rel < 1e-6 && secs < 10.0,
          fmt("50 points, theta in [0, 3pi/2]: max relative deviation %.2e, max absolute %.2e, %.3f s", rel,
              r.max_deviation, secs)};
}

Outcome over_conversion() {
  const TimeGrid g(50.0, 256);
  const auto s = constant(g, kSignalNm);
  const auto r = propagate(s, constant(g, kPumpNm), WaveguideModel{}.without_linear_terms(), pi);
  const double e0 = s.energy();
  const double restored = std::abs(r.signal_out.energy() - e0) / e0;
  const double residual = r.sf_out.energy() / e0;
  return {restored < 1e-6 && residual < 1e-6,
          fmt("theta = pi: |E_signal - E_in| / E_in = %.2e, E_sf / E_in = %.2e", restored, residual)};
}

Outcome photon_conservation() {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    WaveguideModel wg;
    wg.walkoff_signal_ps = 4.0 * u(rng) - 2.0;
    wg.walkoff_sf_ps = 60.0 * u(rng) - 30.0;
    wg.gvd_signal_ps2 = 2.0 * u(rng) - 1.0;
    wg.gvd_sf_ps2 = 2.0 * u(rng) - 1.0;
    wg.gvd_pump_ps2 = 2.0 * u(rng) - 1.0;
    wg.phase_mismatch = 4.0 * u(rng) - 2.0;
    const auto s = random_comb_field(rng, kSignalNm);
    const auto p = random_comb_field(rng, kPumpNm);
    const auto r = propagate(s, p, wg, 2.0 * u(rng));
    const double total0 = r.photon_flux_trace.front().signal + r.photon_flux_trace.front().sf;
    for (const auto& f : r.photon_flux_trace)
      worst = std::max(worst, std::abs(f.signal + f.sf - total0) / total0);
  }
  return {worst < 1e-8, fmt("100 random pairs with walk-off and dispersion: worst drift %.2e", worst)};
}

struct ScenarioRuns {
  std::vector<ScenarioOutcome> outcomes;
  std::vector<double> seconds;
};

ScenarioRuns run_all() {
  const auto cfg = ExperimentConfig::defaults();
  ScenarioRuns out;
  for (const auto& spec : cfg.scenarios) {
    const auto t0 = std::chrono::steady_clock::now();
    out.outcomes.push_back(run_scenario(cfg, spec, cfg.optimizer.seed));
    out.seconds.push_back(seconds_since(t0));
  }
  return out;
}

Outcome reshaping(const ScenarioRuns& runs) {
  const auto cfg = ExperimentConfig::defaults();
  bool all = runs.outcomes.size() == 4 && cfg.attempts <= 3 && cfg.optimizer.max_evaluations <= 5000 &&
             cfg.optimizer.mode == OptimizerMode::greedy_accept;
  std::ostringstream d;
  for (std::size_t i = 0; i < runs.outcomes.size(); ++i) {
    const auto& o = runs.outcomes[i];
    const bool ok = o.target_met && o.trace.best.v_max >= o.spec.target_vmax &&
                    o.trace.best.eta_mm >= o.spec.target_eta_mm && o.trace.evaluations <= 5000 &&
                    runs.seconds[i] < 600.0;
    all = all && ok;
    d << (i ? "; " : "")
      << fmt("%s v_max %.4f eta_mm %.4f, %d evals, seed %llu (%d of %d), %.0f s%s", o.spec.name.c_str(),
             o.trace.best.v_max, o.trace.best.eta_mm, o.trace.evaluations,
             static_cast<unsigned long long>(o.trace.seed), o.attempts_used, cfg.attempts, runs.seconds[i],
             ok ? "" : " MISSED");
  }
  return {all, d.str()};
}

Outcome consistency() {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> d(-25.0, 25.0);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    auto a = random_comb_field(rng, kSignalNm), b = random_comb_field(rng, kSignalNm);
    b *= std::sqrt(a.energy() / b.energy());
    const double tau = d(rng);
    const double v = visibility(a, b, tau);
    worst = std::max(worst, std::abs(mode_matching(a, b, tau) - v * v));
  }

  const auto s1 = make_signal(SignalShape::s1(), grid());
  const auto se = make_signal(SignalShape::se(), grid());
  // Direct sample sum as the reference for the library overlap.
  cplx direct;
  double e1 = 0.0, ee = 0.0;
  for (std::size_t i = 0; i < s1.size(); ++i) {
    direct += std::conj(s1[i]) * se[i];
    e1 += std::norm(s1[i]);
    ee += std::norm(se[i]);
  }
  const double v_direct = std::abs(direct) / std::sqrt(e1 * ee);
  const double v = visibility(s1, se, 0.0);
  const double eta = mode_matching(s1, se);
  const bool pass = worst < 1e-10 && std::abs(v - v_direct) < 1e-12 && std::abs(v - 0.63) <= 0.08 &&
                    std::abs(eta - 0.40) <= 0.08;
  return {pass, fmt("|eta_mm - V^2| worst %.2e over 100 pairs; S1/Se V = %.4f (direct sum %.4f), eta_mm = %.4f", worst,
                    v, v_direct, eta)};
}

Outcome orthogonality() {
  const auto s1 = make_signal(SignalShape::s1(), grid());
  const auto s2 = make_signal(SignalShape::s2(), grid());
  const auto c = visibility_scan(s1, s2);
  const double v0 = visibility(s1, s2, 0.0);
  return {c.v_max < 1e-3, fmt("delay-scanned v_max(S1, S2) = %.4f at %.2f ps; zero-delay V = %.2e", c.v_max,
                              c.argmax_delay, v0)};
}

Outcome operating_points(const ScenarioRuns& runs) {
  bool all = runs.outcomes.size() == 4;
  std::ostringstream d;
  for (std::size_t i = 0; i < runs.outcomes.size(); ++i) {
    const auto& p = runs.outcomes[i].operating_point;
    all = all && p.eta_r > 0.5;
    d << (i ? "; " : "")
      << fmt("%s eta_r %.3f at scale %.3f, delay %.2f ps", runs.outcomes[i].spec.name.c_str(), p.eta_r, p.pump_scale,
             p.delay_ps);
  }
  return {all, d.str()};
}

// Sub-checks of the property criterion; each returns pass plus a note.
Outcome determinism() {
  const auto cfg = ExperimentConfig::defaults();
  const auto sc = build_scenario(cfg, cfg.scenarios[0]);
  OptimizerConfig oc = cfg.optimizer;
  oc.max_evaluations = 200;
  oc.seed = 99;
  const auto a = run_spsa(seed_pump(sc), sc, oc);
  const auto b = run_spsa(seed_pump(sc), sc, oc);
  bool same = a.records.size() == b.records.size() && a.final_params == b.final_params;
  for (std::size_t i = 0; same && i < a.records.size(); ++i)
    same = a.records[i].checksum == b.records[i].checksum &&
           std::memcmp(&a.records[i].objective, &b.records[i].objective, sizeof(double)) == 0;
  return {same, fmt("determinism %s (%zu records)", same ? "ok" : "BROKEN", a.records.size())};
}

Outcome gradient_check() {
  // Toy quadratic J(x) = -|x - x*|^2 over the 34 comb coordinates.
  constexpr std::size_t dim = 34;
  constexpr int draws = 200;
  std::vector<double> opt(dim), x(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    opt[i] = std::sin(1.0 + static_cast<double>(i));
    x[i] = opt[i] + (i % 2 ? 0.5 : -0.5);
  }
  auto J = [&](const std::vector<double>& p) {
    double s = 0.0;
    for (std::size_t i = 0; i < dim; ++i)
      s += (p[i] - opt[i]) * (p[i] - opt[i]);
    return -s;
  };
  const double c = OptimizerConfig{}.c0;
  Rng rng(OptimizerConfig{}.seed);
  std::vector<double> mean(dim, 0.0);
  for (int k = 0; k < draws; ++k) {
    const auto d = draw_direction(dim, rng);
    auto p = x, m = x;
    for (std::size_t i = 0; i < dim; ++i) {
      p[i] += c * d[i];
      m[i] -= c * d[i];
    }
    const auto g = spsa_gradient(J(p), J(m), d, c);
    for (std::size_t i = 0; i < dim; ++i)
      mean[i] += g[i] / draws;
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < dim; ++i) {
    auto p = x, m = x;
    p[i] += 1e-4;
    m[i] -= 1e-4;
    const double fd = (J(p) - J(m)) / 2e-4;
    worst = std::max(worst, std::abs(mean[i] - fd) / std::abs(fd));
  }
  return {worst <= 0.1, fmt("gradient vs finite differences, %d draws, %zu coordinates: worst relative error %.2f", draws,
                            dim, worst)};
}

Outcome invariances() {
  std::mt19937_64 rng(29);
  const auto a = random_comb_field(rng, kSignalNm), b = random_comb_field(rng, kSignalNm);
  const auto base = visibility_scan(a, b);
  const auto rotated = visibility_scan(std::polar(1.0, 0.7) * a, std::polar(1.0, -2.2) * b);
  const auto shifted = visibility_scan(a, delay(b, 2.0));
  const double phase_err = std::abs(rotated.v_max - base.v_max);
  const double delay_err = std::abs(shifted.v_max - base.v_max);
  const bool ok = phase_err < 1e-12 && delay_err < 1e-9;
  return {ok, fmt("phase/delay invariance %s (%.1e, %.1e)", ok ? "ok" : "BROKEN", phase_err, delay_err)};
}

Outcome parseval_projection() {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> a(0.0, 1.0), p(-pi, pi);
  double parseval = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<CombLine> l(17);
    double lines = 0.0;
    for (auto& x : l) {
      x = {a(rng), p(rng)};
      lines += x.amplitude * x.amplitude;
    }
    const double e = synthesize(FrequencyComb(kSignalNm, 20.0, l), grid()).energy();
    parseval = std::max(parseval, std::abs(e - lines * grid().window()) / (lines * grid().window()));
  }
  // P(P(x)) = P(x) for an arbitrary sampled field.
  ComplexEnvelope noise(grid(), kSignalNm);
  for (std::size_t i = 0; i < noise.size(); ++i)
    noise[i] = std::polar(a(rng), p(rng));
  const auto tmpl = FrequencyComb::flat(kSignalNm);
  const auto once = synthesize(fit_comb(noise, tmpl), grid());
  const auto twice = synthesize(fit_comb(once, tmpl), grid());
  const double idem = relative_distance(once, twice);
  const bool ok = parseval < 1e-10 && idem < 1e-12;
  return {ok, fmt("Parseval %.1e, projection idempotence %.1e", parseval, idem)};
}

Outcome properties() {
  const Outcome parts[] = {determinism(), gradient_check(), invariances(), parseval_projection()};
  Outcome out{true, ""};
  for (const auto& p : parts) {
    out.pass = out.pass && p.pass;
    out.detail += (out.detail.empty() ? "" : "; ") + p.detail + (p.pass ? "" : " [FAIL]");
  }
  return out;
}

} // namespace

int main() {
  std::set<int> failed;
  auto report = [&](int n, const char* name, const Outcome& o) {
    const char* verdict = o.pass ? (kKnownFailures.contains(n) ? "PASS (unexpected)" : "PASS")
                                 : (kKnownFailures.contains(n) ? "FAIL (known limitation)" : "FAIL");
    std::printf("criterion %d %-22s %s: %s\n", n, name, verdict, o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass)
      failed.insert(n);
  };

  report(1, "cw-oracle", cw_oracle());
  report(2, "over-conversion", over_conversion());
  report(3, "photon-conservation", photon_conservation());
  const auto runs = run_all();
  report(4, "reshaping-targets", reshaping(runs));
  report(5, "consistency", consistency());
  report(6, "orthogonality", orthogonality());
  report(7, "operating-point-eta_r", operating_points(runs));
  report(8, "property-suites", properties());

  std::printf("%zu of 8 criteria pass", 8 - failed.size());
  if (failed == kKnownFailures) {
    std::printf("; the failures are the known limitations\n");
    return 0;
  }
  std::printf("; failures differ from the known limitations\n");
  return 1;
}
