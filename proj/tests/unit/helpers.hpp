#pragma once

#include <cmath>
#include <random>

#include "adaagc/core.hpp"
#include "adaagc/data.hpp"
#include "adaagc/losses.hpp"
#include "adaagc/regularizers.hpp"

namespace testing {

using adaagc::Index;
using adaagc::Vector;

inline Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Index>(v.size()));
  Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

// f(x) = 1/2 |x - center|^2
inline adaagc::SmoothOracle shifted_quadratic(Vector center, double scale = 1.0) {
  adaagc::SmoothOracle f;
  f.value = [center, scale](const Vector& x) {
    return 0.5 * scale * (x - center).squaredNorm();
  };
  f.gradient = [center, scale](const Vector& x) -> Vector {
    return scale * (x - center);
  };
  f.lipschitz_hint = scale;
  return f;
}

inline adaagc::SmoothOracle half_norm_sq(Index d) {
  return shifted_quadratic(Vector::Zero(d));
}

inline adaagc::ProxOracle l1(double lambda, Index d) {
  return adaagc::make_regularizer(adaagc::RegularizerKind::l1(lambda), d);
}

inline Vector random_vector(std::mt19937_64& rng, Index d, double scale = 1.0) {
  std::normal_distribution<double> n(0.0, scale);
  Vector v(d);
  for (Index i = 0; i < d; ++i) v[i] = n(rng);
  return v;
}

inline Eigen::MatrixXd random_matrix(std::mt19937_64& rng, Index n, Index d) {
  std::normal_distribution<double> g;
  Eigen::MatrixXd A(n, d);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < d; ++j) A(i, j) = g(rng);
  return A;
}

inline adaagc::LabeledDataset dataset_from(const Eigen::MatrixXd& A,
                                           const Vector& b) {
  adaagc::LabeledDataset data;
  data.rows = A.sparseView();
  data.rows.makeCompressed();
  data.labels = b;
  return data;
}

inline adaagc::LabeledDataset random_regression(std::mt19937_64& rng, Index n,
                                                Index d) {
  const Eigen::MatrixXd A = random_matrix(rng, n, d);
  return dataset_from(A, random_vector(rng, n));
}

inline adaagc::LabeledDataset random_classification(std::mt19937_64& rng,
                                                    Index n, Index d) {
  const Eigen::MatrixXd A = random_matrix(rng, n, d);
  const Vector w = random_vector(rng, d);
  std::normal_distribution<double> noise(0.0, 0.5);
  Vector b(n);
  for (Index i = 0; i < n; ++i) b[i] = A.row(i).dot(w) + noise(rng) >= 0 ? 1.0 : -1.0;
  return dataset_from(A, b);
}

}  // namespace testing
