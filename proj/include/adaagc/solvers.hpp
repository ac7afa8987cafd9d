#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "adaagc/core.hpp"

namespace adaagc {

/// Hoelderian error bound parameters: exponent theta, the initial guess c0
/// for the constant c, and the growth factor gamma applied on each
/// conditional restart.
struct HebParams {
  double theta = 0.5;
  double c0 = 10.0;
  double gamma = 2.0;

  void validate() const;
};

enum class StepPolicy { fixed, backtracking };

struct SolverConfig {
  /// Stop once the (proximal) gradient norm is at most this.
  double target_eps = 1e-6;
  std::int64_t max_prox_calls = 10'000'000;
  StepPolicy step_policy = StepPolicy::backtracking;
  /// Overrides the smooth oracle's hint as the (initial) Lipschitz constant.
  /// A fixed step needs one of the two.
  std::optional<double> lipschitz;
  /// Keep per-iteration records. Stage events are always kept.
  bool record_iterations = true;

  void validate() const;
};

enum class RunStatus { converged, budget_exhausted, failed };

std::string to_string(RunStatus status);

/// State after `iteration` steps. `prox_grad_norm` is the most recent
/// (proximal) gradient norm measured by the solver; which point it belongs
/// to is documented per solver. NaN when nothing was measured yet.
struct IterationRecord {
  std::int64_t iteration = 0;
  double objective = 0.0;
  double prox_grad_norm = 0.0;
  std::int64_t prox_calls = 0;
};

enum class StageEventKind {
  advance,  // stage target met, eps halves
  restart,  // inner budget exhausted, c_e grows by gamma
};

struct StageEvent {
  StageEventKind kind = StageEventKind::advance;
  int stage = 0;  // k, 1-based
  int cycle = 0;  // s, 1-based within the stage
  std::int64_t inner_iterations = 0;
  double delta = 0.0;       // regularization used by the cycle (0 for rAPG)
  double c_e = 0.0;         // HEB constant estimate used by the cycle
  double eps_prev = 0.0;    // eps_{k-1}
  double eps = 0.0;         // eps_k after an advance, eps_{k-1} otherwise
  double prox_grad_norm = 0.0;  // at the cycle's last iterate
  double objective = 0.0;       // F at the cycle's last iterate
  double anchor_objective = 0.0;  // F(x_{k-1})
  std::int64_t prox_calls = 0;    // cumulative at the event
};

struct RunTrace {
  std::vector<IterationRecord> iterations;
  std::vector<StageEvent> stages;
  RunStatus status = RunStatus::failed;
  std::string message;
  Vector solution;
  /// Last measured (proximal) gradient norm relevant to `solution`.
  double solution_prox_grad_norm = 0.0;
  double eps0 = 0.0;
  std::int64_t prox_calls = 0;
  std::int64_t total_iterations = 0;
  double final_L = 0.0;
  double final_c_e = 0.0;
  int restarts = 0;
};

enum class PgOption { I, II };

/// Proximal gradient. Option I returns the last iterate and stops when the
/// latest |G(x_t)| <= target_eps; option II returns the iterate with the
/// smallest recorded |G| and stops when that minimum reaches target_eps.
/// Record t holds F(x_t) and |G(x_{t-1})|.
RunTrace pg(const CompositeProblem& problem, const Vector& x0,
            const SolverConfig& config, PgOption option);

/// Accelerated proximal gradient with beta_t = (t-1)/(t+2). Record t holds
/// F(x_{t+1}) and |G(y_t)|.
RunTrace apg(const CompositeProblem& problem, const Vector& x0,
             const SolverConfig& config);

/// Stage length t_k = ceil(2 c sqrt(L) eps_{k-1}^(theta - 1/2)).
std::int64_t rapg_stage_length(double c, double L, double eps_prev,
                               double theta);

/// Restarting APG with known theta and c. Runs K = ceil(log2(eps0 /
/// target_eps)) stages; stage k restarts APG from x_{k-1} for t_k steps.
/// eps0 must bound F(x0) - F*. One advance event per stage.
RunTrace rapg(const CompositeProblem& problem, const Vector& x0, double theta,
              double c, double eps0, const SolverConfig& config);

/// Constant momentum (sqrt(L) - sqrt(alpha)) / (sqrt(L) + sqrt(alpha)).
double sc_apg_step_sequence(double L, double alpha);

/// APG for an alpha-strongly convex smooth part with the constant momentum
/// above, run for `iterations` steps (or until target_eps).
RunTrace sc_apg(const CompositeProblem& problem, const Vector& x0,
                double alpha, std::int64_t iterations,
                const SolverConfig& config);

/// delta_k = eps_{k-1}^((1-2theta)/(1-theta)) / (6 c_e^(1/(1-theta))).
double adaagc_smooth_delta(double theta, double eps_prev, double c_e);

/// ceil(2 sqrt((L+delta)/delta) log(sqrt(L(L+delta))/delta)), at least 1.
std::int64_t adaagc_smooth_budget(double L, double delta);

/// adaAGC for min f with theta in (0, 1/2]. Gradient steps are counted as
/// prox calls (g = 0). Record t holds f(x_t) and |grad f(x_t)|.
RunTrace adaagc_smooth(const SmoothOracle& f, const Vector& x0,
                       const HebParams& heb, const SolverConfig& config);

/// Positive root a of a^2 / (A + a) = 2 (1 + delta A) / L.
double adg_coefficient(double A, double delta, double L);

/// Nesterov's accelerated dual gradient for f + g with g alpha-strongly
/// convex, run for T iterations. Record t holds F(x_t).
RunTrace adg(const SmoothOracle& f, const ProxOracle& g, double alpha,
             const Vector& x0, std::int64_t T, const SolverConfig& config = {});

/// Adaptive regularization delta_k for the composite method. eps0 is
/// |G(x_0)| and only enters the theta > 1/2 branch.
double adaagc_composite_delta(double theta, double eps_prev, double c_e,
                              double L, double eps0);

/// ceil(sqrt(2L/delta) log(sqrt(L(L+delta))/delta)), at least 1.
std::int64_t adaagc_composite_budget(double L, double delta);

/// adaAGC for f + g with theta in (0, 1]. Each inner iteration spends one
/// prox for the ADG step, one for the dual-averaging point and one for the
/// termination test |G(x)| at step 1/L on the original problem.
/// Record t holds F(x_t) and |G(x_t)|.
RunTrace adaagc_composite(const CompositeProblem& problem, const Vector& x0,
                          const HebParams& heb, const SolverConfig& config);

}  // namespace adaagc
