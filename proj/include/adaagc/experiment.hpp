#pragma once

// Benchmark harness: a JSON config names a dataset, a list of problems
// (loss + regularizer) and a list of solvers; every (problem, solver, eps)
// cell runs from x0 = 0 and yields one CSV row.

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "adaagc/losses.hpp"
#include "adaagc/regularizers.hpp"
#include "adaagc/solvers.hpp"

namespace adaagc {

struct SolverSpec {
  enum class Kind { pg, apg, rapg, adaagc };

  std::string name;
  Kind kind = Kind::pg;
  PgOption option = PgOption::II;
  HebParams heb;                  // adaagc; rapg reads theta and c
  std::optional<double> c;        // rapg: known HEB constant
};

struct ProblemSpec {
  LossKind loss;
  RegularizerKind regularizer;
  /// "1/n" resolves against the dataset at run time.
  bool lambda_is_inverse_n = false;
  /// Defaults to 1/p for power losses and 1/2 otherwise.
  std::optional<double> theta;

  double resolved_theta() const;
};

struct ExperimentConfig {
  std::string dataset_name;
  std::filesystem::path dataset_path;
  ScalingMode scaling = ScalingMode::none;
  std::vector<ProblemSpec> problems;
  std::vector<double> eps;
  std::int64_t max_prox_calls = 10'000'000;
  StepPolicy step_policy = StepPolicy::backtracking;
  std::vector<SolverSpec> solvers;

  /// Throws InvalidConfiguration on empty problem, eps or solver lists.
  void validate() const;
};

/// Parses JSON text; relative dataset paths resolve against `base_dir`.
ExperimentConfig parse_experiment_config(std::string_view json_text,
                                         const std::filesystem::path& base_dir);
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

struct CellResult {
  std::string solver;
  std::string dataset;
  std::string loss;
  std::string regularizer;
  double lambda = 0.0;
  double eps = 0.0;
  std::int64_t prox_calls = 0;
  double wall_seconds = 0.0;
  RunStatus status = RunStatus::failed;
  std::string message;
};

struct RunOptions {
  int jobs = 1;
  /// When set, one trace CSV per cell is written here.
  std::optional<std::filesystem::path> trace_dir;
};

/// Runs every cell (problems x solvers x eps, in that nesting order) and
/// returns the results in cell order. Loading errors throw; a solver failure
/// only marks its cell as failed.
std::vector<CellResult> run_experiment(const ExperimentConfig& config,
                                       const RunOptions& options = {});

inline constexpr const char* kResultsHeader =
    "solver,dataset,loss,regularizer,lambda,eps,prox_calls,wall_seconds,"
    "status";

void write_results_csv(std::ostream& out,
                       const std::vector<CellResult>& results);
std::vector<CellResult> read_results_csv(std::istream& in);

/// Joins rows on (dataset, loss, regularizer, eps) and reports
/// baseline_calls / solver_calls with two decimals. An empty baseline means
/// the first solver seen. Rows without a matching baseline row produce a
/// warning and are skipped.
std::string compare_report(const std::vector<CellResult>& rows,
                           std::string baseline, std::ostream& warnings);

/// Per solver, prox_calls(power_p) / prox_calls(power_2) for matching
/// (dataset, regularizer, eps). Empty when no power_2 rows exist.
std::string power_scaling_report(const std::vector<CellResult>& rows);

/// Shortest round-trip decimal text.
std::string format_number(double value);

}  // namespace adaagc
