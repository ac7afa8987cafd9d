#pragma once

#include <string>
#include <vector>

#include "adaagc/core.hpp"

namespace adaagc {

/// Nonsmooth term R scaled by its weight: lambda*|x|_1, lambda*|x|_inf,
/// lambda * sum_groups |x_G|_inf, lambda * sum_i huber(x_i; delta), or the
/// indicator of {|x|_1 <= radius}.
struct RegularizerKind {
  enum class Tag { l1, linf, l1inf_groups, huber_norm, l1_ball };

  Tag tag = Tag::l1;
  double lambda = 1.0;
  double delta = 1.0;
  double radius = 1.0;
  /// Group start offsets followed by d: group i is [bounds[i], bounds[i+1]).
  std::vector<Index> group_bounds;

  static RegularizerKind l1(double lambda);
  static RegularizerKind linf(double lambda);
  static RegularizerKind l1inf_groups(double lambda, std::vector<Index> bounds);
  static RegularizerKind huber_norm(double lambda, double delta);
  static RegularizerKind l1_ball(double radius);

  std::string name() const;
};

/// Soft thresholding sign(v_i) * max(|v_i| - t, 0).
Vector prox_l1(const Vector& v, double t);

/// Euclidean projection onto {x : |x|_1 <= s} by sort-and-threshold.
Vector project_l1_ball(const Vector& v, double s);

/// prox of t*|.|_inf via Moreau decomposition: v - t * P_{B1}(v / t).
Vector prox_linf(const Vector& v, double t);

/// Group-wise prox_linf.
Vector prox_l1inf_groups(const Vector& v, double t,
                         const std::vector<Index>& group_bounds);

/// prox of t * sum_i huber(x_i; delta).
Vector prox_huber_norm(const Vector& v, double t, double delta);

/// argmin 1/2|x-u|^2 + eta*g(x) + (eta*delta/2)|x-anchor|^2, i.e. the prox of
/// g_delta = g + (delta/2)|. - anchor|^2, using one call to g.prox.
Vector prox_augmented(const ProxOracle& g, const Vector& u, double eta,
                      double delta, const Vector& anchor);

/// argmin 1/2|x-anchor|^2 + s^T x + A*(g(x) + (delta/2)|x-anchor|^2) where
/// s is the accumulated weighted gradient, using one call to g.prox.
Vector dual_averaging_min(const ProxOracle& g, const Vector& accumulated_grad,
                          double A, double delta, const Vector& anchor);

/// g_delta as a standalone oracle.
ProxOracle make_augmented(ProxOracle g, double delta, Vector anchor);

/// Validates `kind` against `dimension` and returns its oracle.
ProxOracle make_regularizer(const RegularizerKind& kind, Index dimension);

}  // namespace adaagc
