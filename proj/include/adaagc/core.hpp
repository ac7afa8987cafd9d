#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>

#include <Eigen/Core>

namespace adaagc {

using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

// Error hierarchy. Everything thrown by the library derives from Error.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An oracle returned a non-finite value or gradient.
class OracleFailure : public Error {
 public:
  using Error::Error;
};

/// Backtracking could not find an acceptable Lipschitz estimate.
class LipschitzSearchFailure : public Error {
 public:
  using Error::Error;
};

class InvalidConfiguration : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// Builds a vector from raw values, rejecting NaN and Inf entries.
Vector make_dense_vector(std::span<const double> values);

inline bool all_finite(const Vector& v) { return v.allFinite(); }

/// Smooth part f of F = f + g.
struct SmoothOracle {
  std::function<double(const Vector&)> value;
  std::function<Vector(const Vector&)> gradient;
  std::optional<double> lipschitz_hint;
};

/// Nonsmooth part g. `value` may return +inf (indicator functions).
/// `prox(u, eta)` returns argmin_x 1/2 |x - u|^2 + eta * g(x).
struct ProxOracle {
  std::function<double(const Vector&)> value;
  std::function<Vector(const Vector&, double)> prox;
};

/// g = 0; its prox is the identity.
ProxOracle zero_prox();

class CompositeProblem {
 public:
  CompositeProblem(SmoothOracle f, ProxOracle g, Index dimension);

  const SmoothOracle& f() const { return f_; }
  const ProxOracle& g() const { return g_; }
  Index dimension() const { return dimension_; }

  /// F(x) = f(x) + g(x).
  double objective(const Vector& x) const;

 private:
  SmoothOracle f_;
  ProxOracle g_;
  Index dimension_;
};

/// One proximal-gradient step x+ = prox_{eta g}(x - eta grad f(x)) and the
/// proximal gradient G_eta(x) = (x - x+) / eta.
struct ProxGradResult {
  Vector x_plus;
  Vector prox_grad;
  double eta = 0.0;
  /// Number of g.prox invocations spent producing this result.
  std::int64_t prox_calls = 0;
};

/// Running estimate of the Lipschitz constant of grad f. Backtracking only
/// ever increases `current_L`.
struct LipschitzEstimate {
  double current_L = 1.0;
  double backtrack_factor = 2.0;
};

/// Starting estimate: the oracle's hint when present, otherwise 1.
LipschitzEstimate initial_lipschitz(const SmoothOracle& f);

ProxGradResult prox_grad_map(const CompositeProblem& problem, const Vector& x,
                             double eta);

/// Same as above with grad f(x) already available.
ProxGradResult prox_grad_map(const CompositeProblem& problem, const Vector& x,
                             const Vector& grad_x, double eta);

/// Sufficient-decrease test used by every backtracking loop:
/// f(x+) <= f(y) + <grad f(y), x+ - y> + L/2 |x+ - y|^2, with a relative
/// slack of a few ulps so rounding noise near the optimum does not inflate L.
bool descent_condition_holds(double f_plus, double f_y, const Vector& grad_y,
                             const Vector& step, double L);

/// Hard cap on consecutive increases of L within one backtracking search.
inline constexpr int kMaxBacktracks = 64;

/// Proximal-gradient step from y with eta = 1/L', where L' is the smallest
/// est.current_L * factor^k satisfying the descent condition.
std::pair<ProxGradResult, LipschitzEstimate> backtrack_step(
    const CompositeProblem& problem, const Vector& y,
    const LipschitzEstimate& est);

/// Variant reusing f(y) and grad f(y).
std::pair<ProxGradResult, LipschitzEstimate> backtrack_step(
    const CompositeProblem& problem, const Vector& y, double f_y,
    const Vector& grad_y, const LipschitzEstimate& est);

/// |G_eta(x)|_2.
double prox_gradient_norm(const CompositeProblem& problem, const Vector& x,
                          double eta);

// Checked oracle evaluations; throw OracleFailure on non-finite output.
double checked_value(const SmoothOracle& f, const Vector& x);
Vector checked_gradient(const SmoothOracle& f, const Vector& x);

}  // namespace adaagc
