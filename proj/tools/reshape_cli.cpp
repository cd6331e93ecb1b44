#include "reshape/config.hpp"
#include "reshape/error.hpp"
#include "reshape/experiment.hpp"
#include "reshape/io.hpp"
#include "reshape/kernels.hpp"
#include "reshape/parallel.hpp"
#include "reshape/waveform.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>

namespace {

enum Exit { kOk = 0, kConfigError = 1, kRuntimeError = 2, kOracleFailure = 3 };

using namespace reshape;

ExperimentConfig load_or_exit(const std::string& path, int& status) {
  const auto parsed = parse_config(io::read_text(path));
  for (const auto& d : parsed.diagnostics)
    std::cerr << path << ": " << d.to_string() << "\n";
  if (!parsed.ok()) {
    status = kConfigError;
    return {};
  }
  return *parsed.config;
}

int cmd_run(const std::string& path, const std::string& out, std::optional<std::uint64_t> seed, unsigned threads) {
  int status = kOk;
  const auto config = load_or_exit(path, status);
  if (status != kOk)
    return status;
  RunOptions opts;
  if (!out.empty())
    opts.output_dir = out;
  opts.seed = seed;
  opts.threads = threads;
  const auto report = run_experiment(config, opts);
  std::printf("%-12s %-8s %-15s %8s %8s %8s %10s\n", "scenario", "target", "stop", "v_max", "eta_mm", "eta_r",
              "evals");
  for (const auto& s : report.scenarios)
    std::printf("%-12s %-8s %-15s %8.5f %8.5f %8.5f %10d\n", s.spec.name.c_str(), s.target_met ? "met" : "missed",
                std::string(to_string(s.trace.stop)).c_str(), s.trace.best.v_max, s.trace.best.eta_mm,
                s.operating_point.eta_r, s.trace.evaluations);
  if (report.scenarios.empty())
    std::printf("no scenarios configured\n");
  std::printf("output: %s\n", report.output_dir.string().c_str());
  return kOk;
}

int cmd_validate(const std::string& path) {
  const auto diags = validate_config(path);
  for (const auto& d : diags)
    std::cerr << path << ": " << d.to_string() << "\n";
  if (!diags.empty())
    return kConfigError;
  std::printf("%s: ok\n", path.c_str());
  return kOk;
}

int cmd_oracle(int z_steps, bool verbose) {
  const auto r = oracle_check(z_steps);
  if (verbose) {
    std::printf("theta,simulated,expected,deviation\n");
    for (const auto& row : r.rows)
      std::printf("%.17g,%.17g,%.17g,%.3e\n", row.theta, row.simulated, row.expected, row.deviation);
  }
  std::printf("oracle-check z_steps=%d points=%zu max_deviation=%.3e threshold=%.0e %s\n", r.z_steps, r.rows.size(),
              r.max_deviation, r.threshold, r.pass() ? "PASS" : "FAIL");
  return r.pass() ? kOk : kOracleFailure;
}

int cmd_fit(const std::string& tag, const std::string& config_path, const std::string& out) {
  ExperimentConfig config = ExperimentConfig::defaults();
  if (!config_path.empty()) {
    int status = kOk;
    config = load_or_exit(config_path, status);
    if (status != kOk)
      return status;
  }
  const auto shape = parse_shape_tag(tag);
  if (!shape) {
    std::cerr << "unknown shape '" << tag << "' (expected S1, S2 or Se)\n";
    return kConfigError;
  }
  const TimeGrid grid = config.grid();
  const auto signal = make_signal(config.shape(*shape), grid);
  const auto tmpl = FrequencyComb::flat(config.signal_carrier_nm, config.comb_lines, config.spacing_ghz);
  const auto comb = fit_comb(signal, tmpl);
  const double eta = mode_matching(synthesize(comb, grid), signal);
  if (out.empty())
    std::cout << io::comb_to_string(comb);
  else
    io::write_comb(out, comb);
  std::cerr << "projection mode matching " << eta << "\n";
  return kOk;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Temporal-mode reshaping by sum-frequency over-conversion"};
  app.require_subcommand(1);

  unsigned threads = 0;
  app.add_option("--threads", threads, "Worker threads (0 = all cores)");

  std::string config_path, out_dir;
  std::uint64_t seed = 0;
  auto* run = app.add_subcommand("run", "Optimize and scan every scenario in a config");
  run->add_option("config", config_path, "Experiment config (JSON)")->required();
  run->add_option("--out", out_dir, "Output directory (overrides the config)");
  auto* seed_opt = run->add_option("--seed", seed, "Optimizer seed (overrides the config)");
  run->add_option("--threads", threads, "Worker threads (0 = all cores)");

  std::string validate_path;
  auto* validate = app.add_subcommand("validate", "Check a config without running it");
  validate->add_option("config", validate_path, "Experiment config (JSON)")->required();

  int z_steps = 256;
  bool verbose = false;
  auto* oracle = app.add_subcommand("oracle-check", "Compare CW conversion against sin^2(theta)");
  oracle->add_option("--z-steps", z_steps, "Propagation steps")->check(CLI::PositiveNumber);
  oracle->add_flag("-v,--verbose", verbose, "Print every sweep point");

  std::string shape, fit_config, fit_out;
  auto* fit = app.add_subcommand("fit-comb", "Project a named signal shape onto the comb");
  fit->add_option("shape", shape, "S1, S2 or Se")->required();
  fit->add_option("--config", fit_config, "Take grid, comb and shapes from this config");
  fit->add_option("--out", fit_out, "Write the comb here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kConfigError;
  }
  if (threads > 0)
    set_default_threads(threads);

  try {
    if (*run)
      return cmd_run(config_path, out_dir, *seed_opt ? std::optional(seed) : std::nullopt, threads);
    if (*validate)
      return cmd_validate(validate_path);
    if (*oracle)
      return cmd_oracle(z_steps, verbose);
    if (*fit)
      return cmd_fit(shape, fit_config, fit_out);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kRuntimeError;
  }
  return kOk;
}
