#include <algorithm>
#include <cmath>

#include "adaagc/solvers.hpp"
#include "solver_support.hpp"

namespace adaagc {

void HebParams::validate() const {
  if (!(theta > 0.0 && theta <= 1.0)) {
    throw InvalidConfiguration("HEB exponent theta must lie in (0, 1]");
  }
  if (!(c0 > 0.0) || !std::isfinite(c0)) {
    throw InvalidConfiguration("initial HEB constant c0 must be positive");
  }
  if (!(gamma > 1.0) || !std::isfinite(gamma)) {
    throw InvalidConfiguration("growth factor gamma must exceed 1");
  }
}

void SolverConfig::validate() const {
  if (!(target_eps > 0.0)) {
    throw InvalidConfiguration("target_eps must be positive");
  }
  if (max_prox_calls <= 0) {
    throw InvalidConfiguration("max_prox_calls must be positive");
  }
  if (lipschitz && !(*lipschitz > 0.0 && std::isfinite(*lipschitz))) {
    throw InvalidConfiguration("lipschitz override must be positive");
  }
}

std::string to_string(RunStatus status) {
  switch (status) {
    case RunStatus::converged: return "converged";
    case RunStatus::budget_exhausted: return "budget_exhausted";
    case RunStatus::failed: return "failed";
  }
  return "failed";
}

namespace detail {

void validate_start(const CompositeProblem& problem, const Vector& x0) {
  if (x0.size() != problem.dimension()) {
    throw DimensionMismatch("starting point has dimension " +
                            std::to_string(x0.size()) + ", problem has " +
                            std::to_string(problem.dimension()));
  }
  if (!x0.allFinite()) throw InvalidConfiguration("starting point not finite");
}

LipschitzEstimate starting_estimate(const SmoothOracle& f,
                                    const SolverConfig& config) {
  LipschitzEstimate est = initial_lipschitz(f);
  if (config.lipschitz) est.current_L = *config.lipschitz;
  if (config.step_policy == StepPolicy::fixed && !config.lipschitz &&
      !f.lipschitz_hint) {
    throw InvalidConfiguration(
        "a fixed step needs a Lipschitz constant (hint or override)");
  }
  return est;
}

}  // namespace detail

using detail::kNaN;
using detail::RunRecorder;
using detail::StepControl;

RunTrace pg(const CompositeProblem& problem, const Vector& x0,
            const SolverConfig& config, PgOption option) {
  config.validate();
  detail::validate_start(problem, x0);
  RunRecorder rec(config);
  StepControl ctl(problem, config);

  Vector x = x0;
  Vector best_x = x0;
  double best = std::numeric_limits<double>::infinity();
  double latest = kNaN;
  std::int64_t t = 0;
  try {
    double fx = checked_value(problem.f(), x);
    Vector gx = checked_gradient(problem.f(), x);
    rec.record(0, fx + problem.g().value(x), kNaN);
    rec.trace.status = RunStatus::budget_exhausted;
    while (!rec.exhausted()) {
      ProxGradResult r = ctl.step(x, fx, gx);
      rec.add_calls(r.prox_calls);
      latest = r.prox_grad.norm();
      if (latest < best) {
        best = latest;
        best_x = x;
      }
      x = std::move(r.x_plus);
      fx = checked_value(problem.f(), x);
      gx = checked_gradient(problem.f(), x);
      ++t;
      rec.record(t, fx + problem.g().value(x), latest);
      const double measure = option == PgOption::I ? latest : best;
      if (measure <= config.target_eps) {
        rec.trace.status = RunStatus::converged;
        break;
      }
    }
    rec.record_final(t, fx + problem.g().value(x), latest);
  } catch (const OracleFailure& e) {
    rec.trace.status = RunStatus::failed;
    rec.trace.message = e.what();
  } catch (const LipschitzSearchFailure& e) {
    rec.trace.status = RunStatus::failed;
    rec.trace.message = e.what();
  }
  RunTrace& out = rec.trace;
  if (option == PgOption::I) {
    out.solution = x;
    out.solution_prox_grad_norm = latest;
  } else {
    out.solution = best_x;
    out.solution_prox_grad_norm = best;
  }
  out.final_L = ctl.L();
  return std::move(out);
}

RunTrace apg(const CompositeProblem& problem, const Vector& x0,
             const SolverConfig& config) {
  config.validate();
  detail::validate_start(problem, x0);
  RunRecorder rec(config);
  StepControl ctl(problem, config);

  Vector x = x0;
  Vector x_prev = x0;
  double latest = kNaN;
  std::int64_t t = 0;
  try {
    rec.record(0, problem.objective(x), kNaN);
    rec.trace.status = RunStatus::budget_exhausted;
    while (!rec.exhausted()) {
      ++t;
      const double beta = static_cast<double>(t - 1) / static_cast<double>(t + 2);
      const Vector y = x + beta * (x - x_prev);
      const Vector gy = checked_gradient(problem.f(), y);
      const double fy =
          ctl.backtracking() ? checked_value(problem.f(), y) : kNaN;
      ProxGradResult r = ctl.step(y, fy, gy);
      rec.add_calls(r.prox_calls);
      latest = r.prox_grad.norm();
      x_prev = std::move(x);
      x = std::move(r.x_plus);
      rec.record(t, problem.objective(x), latest);
      if (latest <= config.target_eps) {
        rec.trace.status = RunStatus::converged;
        break;
      }
    }
    rec.record_final(t, problem.objective(x), latest);
  } catch (const OracleFailure& e) {
    rec.trace.status = RunStatus::failed;
    rec.trace.message = e.what();
  } catch (const LipschitzSearchFailure& e) {
    rec.trace.status = RunStatus::failed;
    rec.trace.message = e.what();
  }
  rec.trace.solution = x;
  rec.trace.solution_prox_grad_norm = latest;
  rec.trace.final_L = ctl.L();
  return std::move(rec.trace);
}

std::int64_t rapg_stage_length(double c, double L, double eps_prev,
                               double theta) {
  if (!(c > 0.0) || !(L > 0.0) || !(eps_prev > 0.0) ||
      !(theta > 0.0 && theta <= 1.0)) {
    throw InvalidConfiguration("rAPG schedule needs c, L, eps > 0 and "
                               "theta in (0, 1]");
  }
  const double len = std::ceil(2.0 * c * std::sqrt(L) *
                               std::pow(eps_prev, theta - 0.5));
  return std::max<std::int64_t>(1, static_cast<std::int64_t>(len));
}

RunTrace rapg(const CompositeProblem& problem, const Vector& x0, double theta,
              double c, double eps0, const SolverConfig& config) {
  config.validate();
  detail::validate_start(problem, x0);
  if (!(eps0 > 0.0)) throw InvalidConfiguration("eps0 must be positive");
  if (!(c > 0.0)) throw InvalidConfiguration("HEB constant c must be positive");
  if (!(theta > 0.0 && theta <= 1.0)) {
    throw InvalidConfiguration("theta must lie in (0, 1]");
  }
  RunRecorder rec(config);
  StepControl ctl(problem, config);

  const int stages =
      eps0 <= config.target_eps
          ? 0
          : static_cast<int>(std::ceil(std::log2(eps0 / config.target_eps)));
  rec.trace.eps0 = eps0;

  Vector anchor = x0;
  double eps = eps0;
  double latest = kNaN;
  std::int64_t t = 0;
  try {
    double anchor_obj = problem.objective(anchor);
    rec.record(0, anchor_obj, kNaN);
    rec.trace.status = RunStatus::converged;
    for (int k = 1; k <= stages; ++k) {
      const std::int64_t len = rapg_stage_length(c, ctl.L(), eps, theta);
      Vector x = anchor;
      Vector y = anchor;
      std::int64_t tau = 1;
      for (; tau <= len; ++tau) {
        if (rec.exhausted()) {
          rec.trace.status = RunStatus::budget_exhausted;
          break;
        }
        const Vector gy = checked_gradient(problem.f(), y);
        const double fy =
            ctl.backtracking() ? checked_value(problem.f(), y) : kNaN;
        ProxGradResult r = ctl.step(y, fy, gy);
        rec.add_calls(r.prox_calls);
        latest = r.prox_grad.norm();
        const double momentum =
            static_cast<double>(tau) / static_cast<double>(tau + 3);
        y = r.x_plus + momentum * (r.x_plus - x);
        x = std::move(r.x_plus);
        ++t;
        rec.record(t, problem.objective(x), latest);
      }
      anchor = std::move(x);
      if (rec.trace.status == RunStatus::budget_exhausted) break;
      StageEvent ev;
      ev.kind = StageEventKind::advance;
      ev.stage = k;
      ev.cycle = 1;
      ev.inner_iterations = len;
      ev.c_e = c;
      ev.eps_prev = eps;
      eps /= 2.0;
      ev.eps = eps;
      ev.prox_grad_norm = latest;
      ev.anchor_objective = anchor_obj;
      anchor_obj = problem.objective(anchor);
      ev.objective = anchor_obj;
      ev.prox_calls = rec.trace.prox_calls;
      rec.trace.stages.push_back(ev);
    }
    rec.record_final(t, problem.objective(anchor), latest);
  } catch (const OracleFailure& e) {
    rec.trace.status = RunStatus::failed;
    rec.trace.message = e.what();
  } catch (const LipschitzSearchFailure& e) {
    rec.trace.status = RunStatus::failed;
    rec.trace.message = e.what();
  }
  rec.trace.solution = anchor;
  rec.trace.solution_prox_grad_norm = latest;
  rec.trace.final_L = ctl.L();
  rec.trace.final_c_e = c;
  return std::move(rec.trace);
}

double sc_apg_step_sequence(double L, double alpha) {
  if (!(alpha > 0.0) || !(L > 0.0)) {
    throw InvalidConfiguration("L and alpha must be positive");
  }
  if (alpha > L) {
    throw InvalidConfiguration("strong convexity alpha exceeds smoothness L");
  }
  const double sl = std::sqrt(L);
  const double sa = std::sqrt(alpha);
  return (sl - sa) / (sl + sa);
}

RunTrace sc_apg(const CompositeProblem& problem, const Vector& x0,
                double alpha, std::int64_t iterations,
                const SolverConfig& config) {
  config.validate();
  detail::validate_start(problem, x0);
  if (!(alpha > 0.0)) throw InvalidConfiguration("alpha must be positive");
  if (iterations < 0) throw InvalidConfiguration("iterations must be >= 0");
  RunRecorder rec(config);
  StepControl ctl(problem, config);

  Vector x = x0;
  Vector x_prev = x0;
  double latest = kNaN;
  std::int64_t t = 0;
  try {
    rec.record(0, problem.objective(x), kNaN);
    rec.trace.status = RunStatus::converged;
    while (t < iterations) {
      if (rec.exhausted()) {
        rec.trace.status = RunStatus::budget_exhausted;
        break;
      }
      const double beta = sc_apg_step_sequence(std::max(ctl.L(), alpha), alpha);
      const Vector y = x + beta * (x - x_prev);
      const Vector gy = checked_gradient(problem.f(), y);
      const double fy =
          ctl.backtracking() ? checked_value(problem.f(), y) : kNaN;
      ProxGradResult r = ctl.step(y, fy, gy);
      rec.add_calls(r.prox_calls);
      latest = r.prox_grad.norm();
      x_prev = std::move(x);
      x = std::move(r.x_plus);
      ++t;
      rec.record(t, problem.objective(x), latest);
      if (latest <= config.target_eps) break;
    }
    rec.record_final(t, problem.objective(x), latest);
  } catch (const OracleFailure& e) {
    rec.trace.status = RunStatus::failed;
    rec.trace.message = e.what();
  } catch (const LipschitzSearchFailure& e) {
    rec.trace.status = RunStatus::failed;
    rec.trace.message = e.what();
  }
  rec.trace.solution = x;
  rec.trace.solution_prox_grad_norm = latest;
  rec.trace.final_L = ctl.L();
  return std::move(rec.trace);
}

}  // namespace adaagc
