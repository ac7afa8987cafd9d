#include <algorithm>
#include <cmath>

#include "adaagc/solvers.hpp"
#include "solver_support.hpp"

namespace adaagc {

using detail::kNaN;

namespace {

std::int64_t ceil_budget(double value) {
  if (!std::isfinite(value) || value > 9.0e18) {
    throw InvalidConfiguration("inner iteration budget overflows");
  }
  return std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(value)));
}

int stage_count(double eps0, double target) {
  if (eps0 <= target) return 0;
  return static_cast<int>(std::ceil(std::log2(eps0 / target)));
}

void fail(RunTrace& trace, const Error& e) {
  trace.status = RunStatus::failed;
  trace.message = e.what();
}

}  // namespace

double adaagc_smooth_delta(double theta, double eps_prev, double c_e) {
  if (!(theta > 0.0 && theta <= 0.5)) {
    throw InvalidConfiguration("smooth adaAGC needs theta in (0, 1/2]");
  }
  if (!(eps_prev > 0.0) || !(c_e > 0.0)) {
    throw InvalidConfiguration("eps and c_e must be positive");
  }
  const double p = (1.0 - 2.0 * theta) / (1.0 - theta);
  return std::pow(eps_prev, p) / (6.0 * std::pow(c_e, 1.0 / (1.0 - theta)));
}

std::int64_t adaagc_smooth_budget(double L, double delta) {
  if (!(L > 0.0) || !(delta > 0.0)) {
    throw InvalidConfiguration("L and delta must be positive");
  }
  return ceil_budget(2.0 * std::sqrt((L + delta) / delta) *
                     std::log(std::sqrt(L * (L + delta)) / delta));
}

double adaagc_composite_delta(double theta, double eps_prev, double c_e,
                              double L, double eps0) {
  if (!(theta > 0.0 && theta <= 1.0)) {
    throw InvalidConfiguration("theta must lie in (0, 1]");
  }
  if (!(eps_prev > 0.0) || !(c_e > 0.0) || !(L > 0.0)) {
    throw InvalidConfiguration("eps, c_e and L must be positive");
  }
  double d;
  if (theta <= 0.5) {
    const double p = (1.0 - 2.0 * theta) / (1.0 - theta);
    d = std::pow(eps_prev, p) /
        (16.0 * std::pow(c_e, 1.0 / (1.0 - theta)) *
         std::pow(2.0, theta / (1.0 - theta)));
  } else {
    if (!(eps0 > 0.0)) throw InvalidConfiguration("eps0 must be positive");
    d = 1.0 / (32.0 * c_e * c_e * std::pow(eps0, 2.0 * theta - 1.0));
  }
  return std::min(L / 32.0, d);
}

std::int64_t adaagc_composite_budget(double L, double delta) {
  if (!(L > 0.0) || !(delta > 0.0)) {
    throw InvalidConfiguration("L and delta must be positive");
  }
  return ceil_budget(std::sqrt(2.0 * L / delta) *
                     std::log(std::sqrt(L * (L + delta)) / delta));
}

RunTrace adaagc_smooth(const SmoothOracle& f, const Vector& x0,
                       const HebParams& heb, const SolverConfig& config) {
  config.validate();
  heb.validate();
  if (heb.theta > 0.5) {
    throw InvalidConfiguration("smooth adaAGC needs theta in (0, 1/2]");
  }
  if (!f.value || !f.gradient) throw InvalidConfiguration("incomplete oracle");
  if (x0.size() == 0 || !x0.allFinite()) {
    throw InvalidConfiguration("starting point must be finite and nonempty");
  }

  detail::RunRecorder rec(config);
  LipschitzEstimate est = detail::starting_estimate(f, config);
  const bool backtracking = config.step_policy == StepPolicy::backtracking;
  RunTrace& tr = rec.trace;

  Vector anchor = x0;
  double latest = kNaN;
  double c_e = heb.c0;
  std::int64_t t = 0;
  try {
    double f_anchor = checked_value(f, anchor);
    Vector g_anchor = checked_gradient(f, anchor);
    const double eps0 = g_anchor.norm();
    latest = eps0;
    tr.eps0 = eps0;
    rec.record(0, f_anchor, eps0);
    tr.status = RunStatus::converged;
    const int K = stage_count(eps0, config.target_eps);
    double eps_prev = eps0;

    for (int k = 1; k <= K && latest > config.target_eps; ++k) {
      bool advanced = false;
      for (int s = 1; !advanced; ++s) {
        const double L = est.current_L;
        const double delta = adaagc_smooth_delta(heb.theta, eps_prev, c_e);
        const std::int64_t T = adaagc_smooth_budget(L, delta);

        Vector x = anchor;
        Vector y = anchor;
        double f_x = f_anchor;
        std::int64_t tau = 0;
        while (tau < T) {
          if (rec.exhausted()) {
            tr.status = RunStatus::budget_exhausted;
            break;
          }
          const double f_y = backtracking ? checked_value(f, y) : kNaN;
          const Vector grad_y = checked_gradient(f, y);
          const Vector grad_delta = grad_y + delta * (y - anchor);
          Vector x_next;
          double f_next = 0.0;
          for (int b = 0;; ++b) {
            if (b > kMaxBacktracks) {
              throw LipschitzSearchFailure(
                  "no acceptable Lipschitz estimate after 64 increases");
            }
            x_next = y - grad_delta / (est.current_L + delta);
            rec.add_calls(1);
            f_next = checked_value(f, x_next);
            if (!backtracking ||
                descent_condition_holds(f_next, f_y, grad_y, x_next - y,
                                        est.current_L)) {
              break;
            }
            est.current_L *= est.backtrack_factor;
          }
          const double Lc = est.current_L;
          const double beta = sc_apg_step_sequence(Lc + delta, delta);
          y = x_next + beta * (x_next - x);
          x = std::move(x_next);
          f_x = f_next;
          ++tau;
          ++t;
          latest = checked_gradient(f, x).norm();
          rec.record(t, f_x, latest);
          if (latest <= eps_prev / 2.0) {
            advanced = true;
            break;
          }
        }

        StageEvent ev;
        ev.stage = k;
        ev.cycle = s;
        ev.inner_iterations = tau;
        ev.delta = delta;
        ev.c_e = c_e;
        ev.eps_prev = eps_prev;
        ev.prox_grad_norm = latest;
        ev.objective = f_x;
        ev.anchor_objective = f_anchor;
        ev.prox_calls = tr.prox_calls;
        if (advanced) {
          ev.kind = StageEventKind::advance;
          eps_prev /= 2.0;
          ev.eps = eps_prev;
          anchor = std::move(x);
          f_anchor = f_x;
          tr.stages.push_back(ev);
        } else if (tr.status == RunStatus::budget_exhausted) {
          anchor = std::move(x);
          break;
        } else {
          ev.kind = StageEventKind::restart;
          ev.eps = eps_prev;
          tr.stages.push_back(ev);
          c_e *= heb.gamma;
          ++tr.restarts;
        }
      }
      if (tr.status == RunStatus::budget_exhausted) break;
    }
    rec.record_final(t, checked_value(f, anchor), latest);
  } catch (const OracleFailure& e) {
    fail(tr, e);
  } catch (const LipschitzSearchFailure& e) {
    fail(tr, e);
  } catch (const InvalidConfiguration& e) {
    fail(tr, e);
  }
  tr.solution = anchor;
  tr.solution_prox_grad_norm = latest;
  tr.final_L = est.current_L;
  tr.final_c_e = c_e;
  return std::move(rec.trace);
}

RunTrace adaagc_composite(const CompositeProblem& problem, const Vector& x0,
                          const HebParams& heb, const SolverConfig& config) {
  config.validate();
  heb.validate();
  detail::validate_start(problem, x0);

  detail::RunRecorder rec(config);
  detail::StepControl ctl(problem, config);
  LipschitzEstimate& est = ctl.estimate();
  RunTrace& tr = rec.trace;

  Vector anchor = x0;
  double latest = kNaN;
  double c_e = heb.c0;
  std::int64_t t = 0;
  try {
    const double f0 = checked_value(problem.f(), anchor);
    const Vector grad0 = checked_gradient(problem.f(), anchor);
    ProxGradResult G0 = ctl.step(anchor, f0, grad0);
    rec.add_calls(G0.prox_calls);
    const double eps0 = G0.prox_grad.norm();
    latest = eps0;
    tr.eps0 = eps0;
    double F_anchor = f0 + problem.g().value(anchor);
    rec.record(0, F_anchor, eps0);
    tr.status = RunStatus::converged;
    const int K = stage_count(eps0, config.target_eps);
    double eps_prev = eps0;

    for (int k = 1; k <= K && latest > config.target_eps; ++k) {
      bool advanced = false;
      for (int s = 1; !advanced; ++s) {
        const double L = est.current_L;
        const double delta =
            adaagc_composite_delta(heb.theta, eps_prev, c_e, L, eps0);
        const std::int64_t T = adaagc_composite_budget(L, delta);

        detail::AdgEngine engine(problem.f(), problem.g(), delta, delta,
                                 anchor, ctl.backtracking(), est);
        detail::AdgState st = engine.start();
        double F_x = F_anchor;
        std::int64_t inner = 0;
        while (inner < T) {
          if (rec.exhausted()) {
            tr.status = RunStatus::budget_exhausted;
            break;
          }
          rec.add_calls(engine.step(st));
          const ProxGradResult G =
              prox_grad_map(problem, st.x, st.grad_x, 1.0 / est.current_L);
          rec.add_calls(G.prox_calls);
          latest = G.prox_grad.norm();
          F_x = st.f_x + problem.g().value(st.x);
          ++inner;
          ++t;
          rec.record(t, F_x, latest);
          if (latest <= eps_prev / 2.0) {
            advanced = true;
            break;
          }
        }

        StageEvent ev;
        ev.stage = k;
        ev.cycle = s;
        ev.inner_iterations = inner;
        ev.delta = delta;
        ev.c_e = c_e;
        ev.eps_prev = eps_prev;
        ev.prox_grad_norm = latest;
        ev.objective = F_x;
        ev.anchor_objective = F_anchor;
        ev.prox_calls = tr.prox_calls;
        if (advanced) {
          ev.kind = StageEventKind::advance;
          eps_prev /= 2.0;
          ev.eps = eps_prev;
          anchor = std::move(st.x);
          F_anchor = F_x;
          tr.stages.push_back(ev);
        } else if (tr.status == RunStatus::budget_exhausted) {
          anchor = std::move(st.x);
          break;
        } else {
          ev.kind = StageEventKind::restart;
          ev.eps = eps_prev;
          tr.stages.push_back(ev);
          c_e *= heb.gamma;
          ++tr.restarts;
        }
      }
      if (tr.status == RunStatus::budget_exhausted) break;
    }
    rec.record_final(t, problem.objective(anchor), latest);
  } catch (const OracleFailure& e) {
    fail(tr, e);
  } catch (const LipschitzSearchFailure& e) {
    fail(tr, e);
  } catch (const InvalidConfiguration& e) {
    fail(tr, e);
  }
  tr.solution = anchor;
  tr.solution_prox_grad_norm = latest;
  tr.final_L = est.current_L;
  tr.final_c_e = c_e;
  return std::move(rec.trace);
}

}  // namespace adaagc
