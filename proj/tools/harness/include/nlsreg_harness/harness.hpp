#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "nlsreg/solvers.hpp"

namespace nlsreg::harness {

enum class ProblemId { GroupLasso, Svm, FH };
enum class SolverId { R2, LM, LMTR };

const char* to_string(ProblemId id);
const char* to_string(SolverId id);
ProblemId parse_problem(const std::string& name);
SolverId parse_solver(const std::string& name);

/// Invalid configuration; the CLI maps it to exit code 64.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  ProblemId problem = ProblemId::GroupLasso;
  SolverId solver = SolverId::LMTR;
  /// Unset values take the per-problem defaults.
  std::optional<double> lambda;
  std::optional<double> atol;
  double rtol = 1e-4;
  std::uint64_t seed = 1;
  int max_inner = 100;
  std::optional<int> max_outer;

  Index observations = 200;
  Index signal_length = 512;
  Index groups = 16;
  Index active_groups = 5;
  double noise = 0.01;

  Index svm_train = 400;
  Index svm_test = 100;
  Index svm_dimension = 50;
  Index svm_informative = 5;
  double svm_separation = 1.5;

  Index fh_intervals = 100;
  int fh_steps_per_sample = 20;

  std::string mnist_dir;

  double effective_lambda() const;
  double effective_atol() const;
  int effective_max_outer() const;
  /// Throws ConfigError.
  void validate() const;
};

/// Sets one key (CLI flag names with '-' or '_'). Throws ConfigError on an
/// unknown key or a malformed value.
void apply_setting(RunConfig& config, const std::string& key, const std::string& value);

/// Flat "key = value" lines; '#' starts a comment.
void apply_config_text(RunConfig& config, const std::string& text);
void apply_config_file(RunConfig& config, const std::string& path);

/// Canonical key=value listing of every field, one per line.
std::string canonical_config(const RunConfig& config);
/// FNV-1a of the canonical listing.
std::uint64_t config_hash(const RunConfig& config);
/// "<problem>-<solver>-<seed>-<hash>"; unique per configuration.
std::string run_name(const RunConfig& config);

struct RunReport {
  RunConfig config;
  SolverStats stats;
  std::optional<double> error_norm;
  std::optional<double> train_accuracy;
  std::optional<double> test_accuracy;
  Index zeros = 0;
};

/// Builds the problem from the seed, solves it and derives the metrics.
RunReport run(const RunConfig& config);

/// 0 first-order, 2 max-iter, 3 stalled.
int exit_code(SolverStatus status);

/// Deterministic JSON without wall-clock time.
std::string report_json(const RunReport& report);
/// Inverse of report_json for the fields the table and history need; the
/// trace is not stored.
RunReport report_from_json(const std::string& text);

enum class TableFormat { Text, Csv };

/// One row per report in the given order. Two decimals for f, h, f+h and the
/// error, integer counts, accuracy columns when any report is an SVM run.
std::string emit_table(const std::vector<RunReport>& reports, TableFormat format);

/// Whitespace-separated plot data: evaluation, f, h, f+h, accepted flag and
/// the running minimum of f+h over accepted evaluations.
std::string emit_history(const RunReport& report);

}  // namespace nlsreg::harness
