#include <cstdio>
#include <exception>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "skembed/experiments.hpp"

namespace {

// Exit codes: 0 all metrics pass, 1 metric failure, 2 config error, 3 I/O.
constexpr int kExitPass = 0;
constexpr int kExitMetricFailure = 1;
constexpr int kExitConfigError = 2;
constexpr int kExitIoError = 3;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Experiment driver for Poisson-embedded random walks and "
               "transport-process approximations"};
  app.footer("Registered experiments: verify-embedding, verify-asym, "
             "transport-invariants, sup-rate, grid-rate, bounds-audit");

  std::string name;
  std::string config_path;
  skembed::ExperimentConfig flags;
  app.add_option("experiment", name, "Registered experiment name");
  app.add_option("--config", config_path,
                 "Flat key=value config file; flags override its values");
  auto* opt_lambda = app.add_option("--lambda", flags.lambda, "Intensity scale");
  auto* opt_mu = app.add_option("--mu", flags.mu, "Drift");
  auto* opt_sigma = app.add_option("--sigma", flags.sigma, "Volatility");
  auto* opt_n = app.add_option("--n", flags.n, "Sweep base index");
  auto* opt_q = app.add_option("--q", flags.q, "Tail exponent");
  auto* opt_reps = app.add_option("--reps", flags.reps, "Replication count");
  auto* opt_samples = app.add_option("--samples", flags.samples, "Sample size");
  auto* opt_mesh = app.add_option("--mesh", flags.mesh, "Fine-grid mesh width");
  auto* opt_seed = app.add_option("--seed", flags.seed, "Master seed (u64)");
  auto* opt_workers = app.add_option("--workers", flags.workers,
                                     "Worker threads (0 = auto); never "
                                     "affects results");
  auto* opt_out = app.add_option("--out", flags.out,
                                 "Report path (default: stdout)");
  auto* opt_format = app.add_option("--format", flags.format,
                                    "Report format: csv | json");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitPass : kExitConfigError;
  }

  skembed::ExperimentConfig config;
  try {
    if (!config_path.empty())
      config = skembed::load_config_file(config_path, config);
    if (!name.empty()) config.name = name;
    if (*opt_lambda) config.lambda = flags.lambda;
    if (*opt_mu) config.mu = flags.mu;
    if (*opt_sigma) config.sigma = flags.sigma;
    if (*opt_n) config.n = flags.n;
    if (*opt_q) config.q = flags.q;
    if (*opt_reps) config.reps = flags.reps;
    if (*opt_samples) config.samples = flags.samples;
    if (*opt_mesh) config.mesh = flags.mesh;
    if (*opt_seed) config.seed = flags.seed;
    if (*opt_workers) config.workers = flags.workers;
    if (*opt_out) config.out = flags.out;
    if (*opt_format) config.format = flags.format;
    config = skembed::apply_defaults(config);
    skembed::validate_config(config);
  } catch (const std::ios_base::failure& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIoError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfigError;
  }

  skembed::ExperimentReport report;
  try {
    report = skembed::run_experiment(config);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfigError;
  }

  try {
    skembed::write_report(report);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIoError;
  }

  std::size_t passed = 0;
  for (const auto& m : report.metrics)
    if (m.pass) ++passed;
  if (!config.out.empty()) {
    std::cout << config.name << ": " << passed << "/" << report.metrics.size()
              << " metrics passed in " << report.duration_seconds << " s ("
              << config.out << ")\n";
  } else {
    std::cerr << config.name << ": " << passed << "/" << report.metrics.size()
              << " metrics passed in " << report.duration_seconds << " s\n";
  }
  return report.all_pass() ? kExitPass : kExitMetricFailure;
}
