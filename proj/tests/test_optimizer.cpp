#include "reshape/config.hpp"
#include "reshape/error.hpp"
#include "reshape/experiment.hpp"
#include "reshape/optimizer.hpp"
#include "reshape/waveform.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace reshape;

namespace {

constexpr double pi = std::numbers::pi;

std::vector<double> additive_step(std::span<const double> x, std::span<const double> d, double s) {
  std::vector<double> out(x.begin(), x.end());
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] += s * d[i];
  return out;
}

// J(x) = -|x - x*|^2 on the 34-dimensional comb parameter space.
struct Quadratic {
  std::vector<double> optimum;

  double operator()(const std::vector<double>& x) const {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
      s += (x[i] - optimum[i]) * (x[i] - optimum[i]);
    return -s;
  }

  SpsaProblem problem() const {
    return {[this](const std::vector<double>& x) { return ObjectiveValue{(*this)(x), 0.0, 0.0}; }, additive_step, {}};
  }
};

Quadratic make_quadratic(std::size_t dim = 34) {
  Quadratic q;
  for (std::size_t i = 0; i < dim; ++i)
    q.optimum.push_back(std::sin(1.0 + static_cast<double>(i)));
  return q;
}

double distance(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

Scenario s1_to_s2() {
  const auto cfg = ExperimentConfig::defaults();
  return build_scenario(cfg, cfg.scenarios[0]);
}

OptimizerConfig quick(int evaluations, std::uint64_t seed = 1) {
  OptimizerConfig c;
  c.max_evaluations = evaluations;
  c.seed = seed;
  return c;
}

} // namespace

TEST_CASE("perturb") {
  const auto comb = FrequencyComb::flat(kPumpNm, 17, 20.0, 0.5);
  SUBCASE("zero gain leaves the comb unchanged") {
    Rng rng(1);
    const auto p = perturb(comb, 0.0, rng);
    CHECK(p.plus == comb);
    CHECK(p.minus == comb);
  }
  SUBCASE("same seed, same directions") {
    Rng a(42), b(42);
    for (int i = 0; i < 5; ++i)
      CHECK(perturb(comb, 0.1, a).delta == perturb(comb, 0.1, b).delta);
  }
  SUBCASE("directions are +-1 and opposite for plus/minus") {
    Rng rng(3);
    const auto p = perturb(comb, 0.1, rng);
    REQUIRE(p.delta.size() == 34);
    for (std::size_t i = 0; i < 17; ++i) {
      CHECK(std::abs(p.delta[i]) == 1.0);
      CHECK(p.plus.line(i).amplitude == doctest::Approx(0.5 * (1.0 + 0.1 * p.delta[i])));
      CHECK(p.minus.line(i).amplitude == doctest::Approx(0.5 * (1.0 - 0.1 * p.delta[i])));
      CHECK(p.plus.line(i).phase == doctest::Approx(wrap_phase(0.1 * pi * p.delta[17 + i])));
    }
  }
  SUBCASE("amplitudes clamp at zero") {
    std::vector<CombLine> lines(17, {0.01, 0.0});
    lines[8].amplitude = 1.0;
    const FrequencyComb small(kPumpNm, 20.0, lines);
    Rng rng(5);
    for (int i = 0; i < 20; ++i) {
      const auto p = perturb(small, 2.0, rng);
      for (const auto* c : {&p.plus, &p.minus})
        for (const auto& l : c->lines()) {
          CHECK(l.amplitude >= 0.0);
          CHECK(l.phase >= -pi);
          CHECK(l.phase < pi);
        }
    }
  }
  SUBCASE("a step that would zero every amplitude keeps the old ones") {
    const std::vector<double> params = to_params(comb);
    std::vector<double> d(34, -1.0);
    const auto out = comb_step(params, d, 2.0);
    for (std::size_t i = 0; i < 17; ++i)
      CHECK(out[i] == params[i]);
  }
  SUBCASE("draw_direction uses the high bit") {
    Rng a(9), b(9);
    const auto d = draw_direction(8, a);
    for (double v : d)
      CHECK(v == ((b() >> 63) ? 1.0 : -1.0));
  }
}

TEST_CASE("parameter vector round trip and checksum") {
  Rng rng(11);
  const auto comb = perturb(FrequencyComb::flat(kPumpNm), 0.3, rng).plus;
  const auto p = to_params(comb);
  CHECK(from_params(p, comb) == comb);
  CHECK(checksum(p) == checksum(to_params(from_params(p, comb))));
  auto q = p;
  q[3] = std::nextafter(q[3], 10.0);
  CHECK(checksum(q) != checksum(p));
  CHECK_THROWS_AS(from_params(std::vector<double>(10), comb), ConfigError);
}

TEST_CASE("config validation and enum names") {
  OptimizerConfig c;
  CHECK_NOTHROW(c.validate());
  c.gamma = 0.7;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = {};
  c.c0 = 0.0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = {};
  c.a0 = 0.0;
  CHECK_NOTHROW(c.validate());
  CHECK(parse_optimizer_mode(to_string(OptimizerMode::spsa_gradient)) == OptimizerMode::spsa_gradient);
  CHECK(parse_coordinate_mask("phases") == CoordinateMask::phases);
  CHECK(parse_stop_reason("stalled") == StopReason::stalled);
  CHECK(!parse_optimizer_mode("sgd"));
  CHECK(c.gain(0) == doctest::Approx(0.0));
  CHECK(OptimizerConfig{}.perturbation(0) == doctest::Approx(OptimizerConfig{}.c0));
}

TEST_CASE("one iteration with a0 = 0 returns the initial point") {
  const auto q = make_quadratic();
  OptimizerConfig c;
  c.mode = OptimizerMode::spsa_gradient;
  c.a0 = 0.0;
  c.max_iters = 1;
  const std::vector<double> x0(34, 0.25);
  const auto t = run_spsa(x0, q.problem(), c);
  CHECK(t.final_params == x0);
  CHECK(t.stop == StopReason::max_iters);
  CHECK(t.evaluations == 4);
}

TEST_CASE("spsa_gradient converges on the toy quadratic") {
  const auto q = make_quadratic();
  OptimizerConfig c;
  c.mode = OptimizerMode::spsa_gradient;
  c.a0 = 0.2;
  c.A = 100.0;
  c.max_iters = 2000;
  c.max_evaluations = 3 * 2000 + 1;
  c.stall_window = 2000;
  const std::vector<double> x0(34, 0.0);
  const auto t = run_spsa(x0, q.problem(), c);
  const double d = distance(t.final_params, q.optimum);
  MESSAGE("distance to optimum after " << t.records.back().iteration << " iterations: " << d);
  CHECK(d < c.c0);
}

TEST_CASE("SPSA gradient is an unbiased estimate of the true gradient") {
  const auto q = make_quadratic();
  std::vector<double> x(34);
  for (std::size_t i = 0; i < x.size(); ++i)
    x[i] = q.optimum[i] + (i % 2 ? 0.5 : -0.5);
  const double c = 0.05;
  std::vector<double> fd(34);
  for (std::size_t i = 0; i < 34; ++i) {
    auto p = x, m = x;
    p[i] += 1e-4;
    m[i] -= 1e-4;
    fd[i] = (q(p) - q(m)) / 2e-4;
  }
  Rng rng(2024);
  const int draws = 50000;
  std::vector<double> mean(34, 0.0);
  for (int k = 0; k < draws; ++k) {
    const auto d = draw_direction(34, rng);
    const auto g = spsa_gradient(q(additive_step(x, d, c)), q(additive_step(x, d, -c)), d, c);
    for (std::size_t i = 0; i < 34; ++i)
      mean[i] += g[i] / draws;
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < 34; ++i)
    worst = std::max(worst, std::abs(mean[i] - fd[i]) / std::abs(fd[i]));
  MESSAGE("worst per-coordinate relative error over " << draws << " draws: " << worst);
  CHECK(worst < 0.1);
}

TEST_CASE("failures are recorded and three in a row abort") {
  int calls = 0;
  SpsaProblem p{[&](const std::vector<double>&) {
                  if (++calls > 1)
                    throw NumericalError("blow-up", 0.5);
                  return ObjectiveValue{0.1, 0.0, 0.0};
                },
                additive_step,
                {}};
  const auto t = run_spsa(std::vector<double>(4, 0.0), p, OptimizerConfig{});
  CHECK(t.stop == StopReason::aborted);
  CHECK(t.failures.size() == 3);
  CHECK(t.final_params == std::vector<double>(4, 0.0));
}

TEST_CASE("stall window stops a run that cannot improve") {
  SpsaProblem p{[](const std::vector<double>&) { return ObjectiveValue{0.5, 0.0, 0.0}; }, additive_step, {}};
  OptimizerConfig c;
  c.stall_window = 25;
  const auto t = run_spsa(std::vector<double>(4, 0.0), p, c);
  CHECK(t.stop == StopReason::stalled);
  CHECK(t.records.back().iteration == 25);
}

TEST_CASE("coordinate mask freezes the masked family") {
  const auto q = make_quadratic();
  OptimizerConfig c;
  c.mode = OptimizerMode::spsa_gradient;
  c.a0 = 0.2;
  c.max_iters = 50;
  auto prob = q.problem();
  prob.active.assign(34, false);
  for (std::size_t i = 17; i < 34; ++i)
    prob.active[i] = true;
  const std::vector<double> x0(34, 0.0);
  const auto t = run_spsa(x0, prob, c);
  for (std::size_t i = 0; i < 17; ++i)
    CHECK(t.final_params[i] == 0.0);
  CHECK(distance(t.final_params, x0) > 0.0);
}

TEST_CASE("reshaping objective") {
  const auto sc = s1_to_s2();
  const auto seed = seed_pump(sc);

  SUBCASE("seed pump is a valid single-peaked comb with peak modulus 1") {
    CHECK(seed.count() == 17);
    for (const auto& l : seed.lines())
      CHECK(l.amplitude >= 0.0);
    const auto field = synthesize(seed, sc.grid());
    CHECK(field.peak_modulus() == doctest::Approx(1.0));
    int peaks = 0;
    const std::size_t n = field.size();
    for (std::size_t i = 0; i < n; ++i) {
      const double here = std::abs(field[i]);
      if (here > 0.1 && here > std::abs(field[(i + n - 1) % n]) && here >= std::abs(field[(i + 1) % n]))
        ++peaks;
    }
    CHECK(peaks == 1);
  }

  SUBCASE("pump amplitude and pump scale trade off exactly") {
    Scenario half = sc;
    half.pump_scale = sc.pump_scale / 2.0;
    const auto a = evaluate_pump(seed, sc);
    const auto b = evaluate_pump(seed.scaled(2.0), half);
    CHECK(b.v_max == doctest::Approx(a.v_max).epsilon(1e-12));
    CHECK(b.eta_mm == doctest::Approx(a.eta_mm).epsilon(1e-12));
  }

  SUBCASE("greedy runs are deterministic per seed") {
    const auto t1 = run_spsa(seed, sc, quick(40, 7));
    const auto t2 = run_spsa(seed, sc, quick(40, 7));
    const auto t3 = run_spsa(seed, sc, quick(40, 8));
    REQUIRE(t1.records.size() == t2.records.size());
    for (std::size_t i = 0; i < t1.records.size(); ++i) {
      CHECK(t1.records[i].checksum == t2.records[i].checksum);
      CHECK(t1.records[i].objective == t2.records[i].objective);
    }
    CHECK(t1.final_params == t2.final_params);
    CHECK(t1.final_params != t3.final_params);
    CHECK(t1.rng == "mt19937_64");
  }

  SUBCASE("greedy acceptance is strictly increasing and beats the seed") {
    const auto t = run_spsa(seed, sc, quick(60, 3));
    double last = -1.0;
    int accepted = 0;
    for (const auto& r : t.records) {
      if (!r.accepted)
        continue;
      CHECK(r.objective > last);
      last = r.objective;
      ++accepted;
      CHECK(r.vmax_so_far == r.objective);
    }
    CHECK(accepted > 1);
    CHECK(t.best.v_max > objective(seed, sc));
    CHECK(t.evaluations <= 60);
    CHECK(*t.final_comb == from_params(t.final_params, seed));
  }
}
