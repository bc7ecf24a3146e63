#ifndef SKEMBED_EXPERIMENTS_HPP
#define SKEMBED_EXPERIMENTS_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace skembed {

inline constexpr const char* kVersion = "0.1.0";

/// Resolved configuration of a named experiment. Zero values for n / q /
/// reps / samples mean "use the experiment's default".
struct ExperimentConfig {
  std::string name;
  double lambda = 1.0;
  double mu = 0.0;
  double sigma = 1.0;
  long n = 0;
  double q = 0.0;
  long reps = 0;
  long samples = 0;
  double mesh = 1e-4;
  std::uint64_t seed = 42;
  int workers = 0;  // 0 = auto; execution detail, never part of report bytes
  std::string out;  // empty = stdout
  std::string format = "csv";
};

/// One verified quantity. The convention is uniform: pass == (estimate <=
/// threshold). `estimate` is always the discrepancy being bounded (a KS
/// statistic, an absolute deviation, an exceedance bound, a violation
/// count); `error_bound` carries the supporting standard error or
/// confidence-interval half-width, 0 when not applicable.
struct MetricRecord {
  std::string name;
  double estimate = 0.0;
  double error_bound = 0.0;
  double threshold = 0.0;
  bool pass = false;
};

MetricRecord make_metric(std::string name, double estimate, double error_bound,
                         double threshold);

struct ExperimentReport {
  ExperimentConfig config;
  std::vector<MetricRecord> metrics;
  std::string version = kVersion;
  /// Wall-clock time of the run. Deliberately excluded from the serialized
  /// report so identical (config, seed) runs produce identical bytes.
  double duration_seconds = 0.0;

  bool all_pass() const;
};

struct ExperimentInfo {
  std::string name;
  std::string description;
  /// Library operations the experiment exercises, drawn from
  /// model_operation_names(). Used by the registry audit: every experiment
  /// must drive the stochastic model, not just the statistics helpers.
  std::vector<std::string> model_ops;
};

const std::vector<ExperimentInfo>& experiment_registry();
const std::vector<std::string>& model_operation_names();
bool is_registered_experiment(const std::string& name);

/// Fills per-experiment defaults for unset (zero) fields.
ExperimentConfig apply_defaults(ExperimentConfig config);

/// Throws std::invalid_argument on unknown names or bad numeric ranges.
void validate_config(const ExperimentConfig& config);

/// Runs one registered experiment. The config is validated and defaulted
/// first; the echoed config in the report is the resolved one.
ExperimentReport run_experiment(const ExperimentConfig& config);

/// Flat key=value configuration text with '#' comments. Unknown keys throw.
ExperimentConfig parse_config_text(const std::string& text,
                                   ExperimentConfig base = {});
ExperimentConfig load_config_file(const std::string& path,
                                  ExperimentConfig base = {});

/// CSV: a '# key=value' config echo, a header row, one metric per row,
/// numbers at 17 significant digits. JSON: one top-level object.
std::string to_csv(const ExperimentReport& report);
std::string to_json(const ExperimentReport& report);
std::string serialize_report(const ExperimentReport& report);

/// Writes the serialized report to config.out (or stdout when empty).
/// Throws std::ios_base::failure on I/O errors.
void write_report(const ExperimentReport& report);

}  // namespace skembed

#endif  // SKEMBED_EXPERIMENTS_HPP
