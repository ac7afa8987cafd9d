#include "adaagc/core.hpp"

#include <cmath>
#include <limits>

namespace adaagc {

Vector make_dense_vector(std::span<const double> values) {
  Vector v(static_cast<Index>(values.size()));
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      throw InvalidConfiguration("vector entry " + std::to_string(i) +
                                 " is not finite");
    }
    v[static_cast<Index>(i)] = values[i];
  }
  return v;
}

ProxOracle zero_prox() {
  return ProxOracle{[](const Vector&) { return 0.0; },
                    [](const Vector& u, double) { return u; }};
}

CompositeProblem::CompositeProblem(SmoothOracle f, ProxOracle g,
                                   Index dimension)
    : f_(std::move(f)), g_(std::move(g)), dimension_(dimension) {
  if (dimension_ <= 0) {
    throw InvalidConfiguration("problem dimension must be positive");
  }
  if (!f_.value || !f_.gradient || !g_.value || !g_.prox) {
    throw InvalidConfiguration("problem oracles must all be set");
  }
  if (f_.lipschitz_hint && !(*f_.lipschitz_hint > 0.0)) {
    throw InvalidConfiguration("lipschitz hint must be positive");
  }
}

double CompositeProblem::objective(const Vector& x) const {
  return f_.value(x) + g_.value(x);
}

LipschitzEstimate initial_lipschitz(const SmoothOracle& f) {
  return LipschitzEstimate{f.lipschitz_hint.value_or(1.0), 2.0};
}

double checked_value(const SmoothOracle& f, const Vector& x) {
  const double v = f.value(x);
  if (!std::isfinite(v)) throw OracleFailure("smooth value is not finite");
  return v;
}

Vector checked_gradient(const SmoothOracle& f, const Vector& x) {
  Vector g = f.gradient(x);
  if (g.size() != x.size()) {
    throw DimensionMismatch("gradient size does not match the point");
  }
  if (!g.allFinite()) throw OracleFailure("gradient is not finite");
  return g;
}

namespace {

void check_step_input(const CompositeProblem& problem, const Vector& x,
                      double eta) {
  if (!(eta > 0.0) || !std::isfinite(eta)) {
    throw InvalidConfiguration("step size must be positive and finite");
  }
  if (x.size() != problem.dimension()) {
    throw DimensionMismatch("point dimension does not match the problem");
  }
  if (!x.allFinite()) throw InvalidConfiguration("point is not finite");
}

}  // namespace

ProxGradResult prox_grad_map(const CompositeProblem& problem, const Vector& x,
                             double eta) {
  check_step_input(problem, x, eta);
  return prox_grad_map(problem, x, checked_gradient(problem.f(), x), eta);
}

ProxGradResult prox_grad_map(const CompositeProblem& problem, const Vector& x,
                             const Vector& grad_x, double eta) {
  check_step_input(problem, x, eta);
  if (!grad_x.allFinite()) throw OracleFailure("gradient is not finite");

  ProxGradResult r;
  r.eta = eta;
  r.x_plus = problem.g().prox(x - eta * grad_x, eta);
  r.prox_calls = 1;
  if (!r.x_plus.allFinite()) throw OracleFailure("prox returned non-finite");
  r.prox_grad = (x - r.x_plus) / eta;
  return r;
}

bool descent_condition_holds(double f_plus, double f_y, const Vector& grad_y,
                             const Vector& step, double L) {
  const double model = f_y + grad_y.dot(step) + 0.5 * L * step.squaredNorm();
  const double slack = 8.0 * std::numeric_limits<double>::epsilon() *
                       (std::abs(f_y) + std::abs(f_plus));
  return f_plus <= model + slack;
}

std::pair<ProxGradResult, LipschitzEstimate> backtrack_step(
    const CompositeProblem& problem, const Vector& y,
    const LipschitzEstimate& est) {
  return backtrack_step(problem, y, checked_value(problem.f(), y),
                        checked_gradient(problem.f(), y), est);
}

std::pair<ProxGradResult, LipschitzEstimate> backtrack_step(
    const CompositeProblem& problem, const Vector& y, double f_y,
    const Vector& grad_y, const LipschitzEstimate& est) {
  if (!(est.current_L > 0.0)) {
    throw InvalidConfiguration("Lipschitz estimate must be positive");
  }
  if (!(est.backtrack_factor > 1.0)) {
    throw InvalidConfiguration("backtracking factor must exceed 1");
  }
  LipschitzEstimate next = est;
  std::int64_t calls = 0;
  for (int k = 0; k <= kMaxBacktracks; ++k) {
    ProxGradResult r = prox_grad_map(problem, y, grad_y, 1.0 / next.current_L);
    calls += r.prox_calls;
    const double f_plus = checked_value(problem.f(), r.x_plus);
    if (descent_condition_holds(f_plus, f_y, grad_y, r.x_plus - y,
                                next.current_L)) {
      r.prox_calls = calls;
      return {std::move(r), next};
    }
    next.current_L *= next.backtrack_factor;
  }
  throw LipschitzSearchFailure(
      "no acceptable Lipschitz estimate after 64 increases");
}

double prox_gradient_norm(const CompositeProblem& problem, const Vector& x,
                          double eta) {
  return prox_grad_map(problem, x, eta).prox_grad.norm();
}

}  // namespace adaagc
