#pragma once

// Reference computations for verification: brute-force prox minimization,
// finite differences, closed-form least squares and synthetic problems with
// known error-bound parameters.

#include <functional>

#include <Eigen/Dense>

#include "adaagc/core.hpp"
#include "adaagc/data.hpp"

namespace adaagc {

using ValueFn = std::function<double(const Vector&)>;

enum class ProxSearch {
  /// g(x) = sum_i g_i(x_i): per-coordinate golden section, any d.
  separable,
  /// Dense grid refinement for d <= 2 (admits +inf), nested golden section
  /// for d == 3.
  joint,
};

/// argmin_x 1/2 |x - u|^2 + eta * g(x), searched on the box
/// [-R, R]^d with R = 10 (1 + |u|_inf). Joint search needs d <= 3.
Vector brute_prox(const ValueFn& g_value, const Vector& u, double eta,
                  ProxSearch search = ProxSearch::joint);

/// Central differences with step 1e-6 (1 + |x|_inf).
Vector finite_difference_gradient(const ValueFn& f, const Vector& x);

/// Problem with analytically known (or probe-fitted) HEB parameters:
/// |x - optimum| <= c_true (F(x) - F_star)^theta_true.
struct SyntheticHeb {
  CompositeProblem problem;
  double theta_true = 0.5;
  double c_true = 1.0;
  Vector optimum;
  double F_star = 0.0;
  /// Smoothness constant of f when known, otherwise 0.
  double L = 0.0;
};

/// f(x) = 1/2 x^T diag(lambda) x with lambda evenly spaced from alpha to L.
/// Because f >= (alpha/2)|x|^2, c_true = sqrt(2/alpha).
SyntheticHeb make_quadratic_heb(double alpha, double L, Index d);

/// F(x) = (1/d) sum_i x_i^p with theta = 1/p. c_true is fitted on probe
/// directions (the ratio |x| / F^theta is scale invariant); the exact value
/// is sqrt(d).
SyntheticHeb make_power_heb(int p, Index d);

struct ReferenceSolution {
  Vector x_star;
  double F_star = 0.0;
};

/// Minimizer of (1/n) |A x - b|^2 from the normal equations; singular systems
/// fall back to a ridge 1e-12 solve.
ReferenceSolution least_squares_reference(const Eigen::MatrixXd& A,
                                          const Vector& b);
ReferenceSolution least_squares_reference(const LabeledDataset& data);

/// High-precision proximal gradient (target 1e-12) from x0.
ReferenceSolution reference_solution(const CompositeProblem& problem,
                                     const Vector& x0,
                                     double target_eps = 1e-12,
                                     std::int64_t max_prox_calls = 5'000'000);

}  // namespace adaagc
