#include <cmath>

#include "adaagc/regularizers.hpp"
#include "adaagc/solvers.hpp"
#include "solver_support.hpp"

namespace adaagc {

namespace detail {

AdgEngine::AdgEngine(const SmoothOracle& f, const ProxOracle& g, double mu,
                     double delta, Vector anchor, bool backtracking,
                     LipschitzEstimate& est)
    : f_(f),
      g_(g),
      mu_(mu),
      delta_(delta),
      anchor_(std::move(anchor)),
      backtracking_(backtracking),
      est_(est) {}

AdgState AdgEngine::start() const {
  AdgState s;
  s.x = anchor_;
  s.v = anchor_;
  s.accumulated_grad = Vector::Zero(anchor_.size());
  s.f_x = checked_value(f_, anchor_);
  s.grad_x = checked_gradient(f_, anchor_);
  return s;
}

std::int64_t AdgEngine::step(AdgState& state) {
  std::int64_t calls = 0;
  for (int k = 0;; ++k) {
    if (k > kMaxBacktracks) {
      throw LipschitzSearchFailure(
          "no acceptable Lipschitz estimate after 64 increases");
    }
    const double L = est_.current_L;
    const double a = adg_coefficient(state.A, mu_, L);
    const double A_next = state.A + a;
    const Vector y = (state.A * state.x + a * state.v) / A_next;
    const Vector grad_y = checked_gradient(f_, y);
    Vector x_next =
        prox_augmented(g_, y - grad_y / L, 1.0 / L, delta_, anchor_);
    ++calls;
    if (!x_next.allFinite()) throw OracleFailure("prox returned non-finite");
    const double f_next = checked_value(f_, x_next);
    if (backtracking_ &&
        !descent_condition_holds(f_next, checked_value(f_, y), grad_y,
                                 x_next - y, L)) {
      est_.current_L *= est_.backtrack_factor;
      continue;
    }
    state.grad_x = checked_gradient(f_, x_next);
    state.f_x = f_next;
    state.x = std::move(x_next);
    state.accumulated_grad += a * state.grad_x;
    state.A = A_next;
    state.v = dual_averaging_min(g_, state.accumulated_grad, state.A, delta_,
                                 anchor_);
    ++calls;
    return calls;
  }
}

}  // namespace detail

double adg_coefficient(double A, double delta, double L) {
  if (!(A >= 0.0) || !(delta >= 0.0) || !(L > 0.0)) {
    throw InvalidConfiguration("adg coefficient needs A, delta >= 0, L > 0");
  }
  const double q = 2.0 * (1.0 + delta * A) / L;
  return 0.5 * (q + std::sqrt(q * q + 4.0 * q * A));
}

RunTrace adg(const SmoothOracle& f, const ProxOracle& g, double alpha,
             const Vector& x0, std::int64_t T, const SolverConfig& config) {
  config.validate();
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw InvalidConfiguration("adg needs a strongly convex g (alpha > 0)");
  }
  if (T < 0) throw InvalidConfiguration("iteration count must be >= 0");
  if (!f.value || !f.gradient || !g.value || !g.prox) {
    throw InvalidConfiguration("adg needs complete oracles");
  }
  if (x0.size() == 0 || !x0.allFinite()) {
    throw InvalidConfiguration("starting point must be finite and nonempty");
  }

  detail::RunRecorder rec(config);
  LipschitzEstimate est = detail::starting_estimate(f, config);
  detail::AdgEngine engine(f, g, alpha, 0.0, x0,
                           config.step_policy == StepPolicy::backtracking, est);
  detail::AdgState state;
  state.x = x0;
  std::int64_t t = 0;
  try {
    state = engine.start();
    rec.record(0, state.f_x + g.value(state.x), detail::kNaN);
    rec.trace.status = RunStatus::converged;
    while (t < T) {
      if (rec.exhausted()) {
        rec.trace.status = RunStatus::budget_exhausted;
        break;
      }
      rec.add_calls(engine.step(state));
      ++t;
      rec.record(t, state.f_x + g.value(state.x), detail::kNaN);
    }
    rec.record_final(t, state.f_x + g.value(state.x), detail::kNaN);
  } catch (const OracleFailure& e) {
    rec.trace.status = RunStatus::failed;
    rec.trace.message = e.what();
  } catch (const LipschitzSearchFailure& e) {
    rec.trace.status = RunStatus::failed;
    rec.trace.message = e.what();
  }
  rec.trace.solution = state.x;
  rec.trace.solution_prox_grad_norm = detail::kNaN;
  rec.trace.final_L = est.current_L;
  return std::move(rec.trace);
}

}  // namespace adaagc
