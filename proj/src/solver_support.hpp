#pragma once

// Bookkeeping shared by the solver implementations.

#include <cmath>
#include <limits>

#include "adaagc/solvers.hpp"

namespace adaagc::detail {

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void validate_start(const CompositeProblem& problem, const Vector& x0);

/// Lipschitz estimate selection: the config override, then the oracle hint,
/// then 1 (backtracking only).
LipschitzEstimate starting_estimate(const SmoothOracle& f,
                                    const SolverConfig& config);

/// Counts prox calls against the budget and accumulates the trace.
class RunRecorder {
 public:
  explicit RunRecorder(const SolverConfig& config) : config_(config) {}

  bool exhausted() const { return trace.prox_calls >= config_.max_prox_calls; }
  void add_calls(std::int64_t n) { trace.prox_calls += n; }

  void record(std::int64_t iteration, double objective, double grad_norm) {
    trace.total_iterations = iteration;
    if (config_.record_iterations || iteration == 0) {
      trace.iterations.push_back(
          {iteration, objective, grad_norm, trace.prox_calls});
    }
  }

  /// Appends the final state when per-iteration records are off.
  void record_final(std::int64_t iteration, double objective,
                    double grad_norm) {
    if (!config_.record_iterations &&
        (trace.iterations.empty() ||
         trace.iterations.back().iteration != iteration)) {
      trace.iterations.push_back(
          {iteration, objective, grad_norm, trace.prox_calls});
    }
  }

  RunTrace trace;

 private:
  const SolverConfig& config_;
};

/// One proximal-gradient step under the configured step policy.
class StepControl {
 public:
  StepControl(const CompositeProblem& problem, const SolverConfig& config)
      : problem_(problem),
        policy_(config.step_policy),
        est_(starting_estimate(problem.f(), config)) {}

  /// f_y is only read when backtracking.
  ProxGradResult step(const Vector& y, double f_y, const Vector& grad_y) {
    if (policy_ == StepPolicy::fixed) {
      return prox_grad_map(problem_, y, grad_y, 1.0 / est_.current_L);
    }
    auto [r, next] = backtrack_step(problem_, y, f_y, grad_y, est_);
    est_ = next;
    return std::move(r);
  }

  bool backtracking() const { return policy_ == StepPolicy::backtracking; }
  double L() const { return est_.current_L; }
  LipschitzEstimate& estimate() { return est_; }

 private:
  const CompositeProblem& problem_;
  StepPolicy policy_;
  LipschitzEstimate est_;
};

/// Dual-averaging accelerated iteration for f + g_delta, where g_delta is g
/// plus (delta/2)|. - anchor|^2 and the coefficient equation uses the
/// strong convexity modulus mu.
struct AdgState {
  double A = 0.0;
  Vector x;
  Vector v;
  Vector accumulated_grad;
  double f_x = 0.0;
  Vector grad_x;
};

class AdgEngine {
 public:
  AdgEngine(const SmoothOracle& f, const ProxOracle& g, double mu,
            double delta, Vector anchor, bool backtracking,
            LipschitzEstimate& est);

  /// A = 0, x = v = anchor.
  AdgState start() const;

  /// One outer iteration. Returns the number of g.prox calls made.
  std::int64_t step(AdgState& state);

  const Vector& anchor() const { return anchor_; }

 private:
  const SmoothOracle& f_;
  const ProxOracle& g_;
  double mu_;
  double delta_;
  Vector anchor_;
  bool backtracking_;
  LipschitzEstimate& est_;
};

}  // namespace adaagc::detail
