#pragma once

#include <memory>
#include <optional>
#include <string>

#include "adaagc/core.hpp"
#include "adaagc/data.hpp"

namespace adaagc {

/// Per-example loss l(z, b) with z = a^T x.
struct LossKind {
  enum class Tag { square, squared_hinge, huber, logistic, power };

  Tag tag = Tag::square;
  double delta = 1.0;  // huber threshold
  int p = 2;           // power exponent, even

  static LossKind square() { return {Tag::square, 1.0, 2}; }
  static LossKind squared_hinge() { return {Tag::squared_hinge, 1.0, 2}; }
  static LossKind huber(double delta);
  static LossKind logistic() { return {Tag::logistic, 1.0, 2}; }
  static LossKind power(int p);

  bool is_classification() const {
    return tag == Tag::squared_hinge || tag == Tag::logistic;
  }
  /// "square", "squared_hinge", "huber", "logistic", "power_<p>".
  std::string name() const;
};

/// Standard Huber function: x^2/2 for |x| <= delta, delta*|x| - delta^2/2
/// beyond.
double huber(double x, double delta);
double huber_derivative(double x, double delta);

double loss_value(const LossKind& kind, double z, double b);

/// d/dz l(z, b).
double loss_derivative(const LossKind& kind, double z, double b);

/// Upper bound on l''(z, b) used for the Lipschitz hint. Empty for power
/// losses, which are always left to backtracking.
std::optional<double> curvature_bound(const LossKind& kind);

/// f(x) = (1/n) sum_i l(a_i^T x, b_i). The hint is (beta/n) sum_i |a_i|^2.
SmoothOracle make_empirical_loss(const LossKind& kind,
                                 std::shared_ptr<const LabeledDataset> data);
SmoothOracle make_empirical_loss(const LossKind& kind, LabeledDataset data);

}  // namespace adaagc
