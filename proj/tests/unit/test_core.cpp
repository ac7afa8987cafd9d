#include <limits>

#include "adaagc/core.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace adaagc;
using testing::vec;

TEST_SUITE("core") {

TEST_CASE("prox_grad_map on a plain quadratic") {
  CompositeProblem p(testing::half_norm_sq(2), zero_prox(), 2);
  const auto r = prox_grad_map(p, vec({2, 0}), 1.0);
  CHECK(r.x_plus.isZero());
  CHECK(r.prox_grad == vec({2, 0}));
  CHECK(r.prox_calls == 1);
  CHECK(r.eta == 1.0);
}

TEST_CASE("prox_grad_map on the 1-D lasso") {
  CompositeProblem p(testing::shifted_quadratic(vec({3})), testing::l1(1.0, 1), 1);
  SUBCASE("optimal point has zero prox gradient") {
    const auto r = prox_grad_map(p, vec({2}), 1.0);
    CHECK(r.x_plus[0] == doctest::Approx(2.0));
    CHECK(r.prox_grad[0] == doctest::Approx(0.0));
  }
  SUBCASE("x = 3") {
    const auto r = prox_grad_map(p, vec({3}), 1.0);
    // grid minimum of 1/2 (u - 3)^2 + |u| over [-10, 10]
    double best_u = 0.0;
    double best = std::numeric_limits<double>::infinity();
    for (int k = 0; k <= 20'000'000; ++k) {
      const double u = -10.0 + k * 1e-6;
      const double v = 0.5 * (u - 3) * (u - 3) + std::abs(u);
      if (v < best) {
        best = v;
        best_u = u;
      }
    }
    CHECK(r.x_plus[0] == doctest::Approx(best_u).epsilon(1e-6));
    CHECK(r.prox_grad[0] == doctest::Approx(3.0 - best_u).epsilon(1e-5));
  }
}

TEST_CASE("prox_grad is reconstructed exactly from x and x_plus") {
  std::mt19937_64 rng(7);
  CompositeProblem p(testing::shifted_quadratic(vec({1, -2, 0.5}), 3.0),
                     testing::l1(0.3, 3), 3);
  for (int trial = 0; trial < 50; ++trial) {
    const Vector x = testing::random_vector(rng, 3, 2.0);
    const double eta = 0.01 + 0.5 * std::abs(testing::random_vector(rng, 1)[0]);
    const auto r = prox_grad_map(p, x, eta);
    const Vector expect = (x - r.x_plus) / eta;
    CHECK((r.prox_grad.array() == expect.array()).all());
  }
}

TEST_CASE("prox_grad_map rejects bad input") {
  CompositeProblem p(testing::half_norm_sq(2), zero_prox(), 2);
  CHECK_THROWS_AS(prox_grad_map(p, vec({1, 1}), 0.0), InvalidConfiguration);
  CHECK_THROWS_AS(prox_grad_map(p, vec({1, 1}), -1.0), InvalidConfiguration);
  CHECK_THROWS_AS(prox_grad_map(p, vec({1, 1, 1}), 1.0), DimensionMismatch);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(prox_grad_map(p, vec({nan, 1}), 1.0), InvalidConfiguration);

  SmoothOracle bad = testing::half_norm_sq(2);
  bad.gradient = [](const Vector& x) -> Vector {
    return Vector::Constant(x.size(), std::numeric_limits<double>::infinity());
  };
  CompositeProblem q(bad, zero_prox(), 2);
  CHECK_THROWS_AS(prox_grad_map(q, vec({1, 1}), 1.0), OracleFailure);
}

TEST_CASE("make_dense_vector rejects non-finite entries") {
  const double ok[] = {1.0, 2.0};
  CHECK(make_dense_vector(ok) == vec({1, 2}));
  const double bad[] = {1.0, std::numeric_limits<double>::infinity()};
  CHECK_THROWS_AS(make_dense_vector(bad), InvalidConfiguration);
}

TEST_CASE("CompositeProblem validation") {
  CHECK_THROWS_AS(CompositeProblem(testing::half_norm_sq(1), zero_prox(), 0),
                  InvalidConfiguration);
  SmoothOracle f = testing::half_norm_sq(1);
  f.lipschitz_hint = -1.0;
  CHECK_THROWS_AS(CompositeProblem(f, zero_prox(), 1), InvalidConfiguration);
  CHECK_THROWS_AS(CompositeProblem(SmoothOracle{}, zero_prox(), 1),
                  InvalidConfiguration);
}

TEST_CASE("backtracking finds the smallest acceptable power of two") {
  SmoothOracle f;
  f.value = [](const Vector& x) { return 2.0 * x.squaredNorm(); };
  f.gradient = [](const Vector& x) -> Vector { return 4.0 * x; };
  CompositeProblem p(f, zero_prox(), 1);

  // Descent inequality by hand: x+ = 1 - 4/L, holds iff L >= 4 among {1,2,4}.
  for (double L : {1.0, 2.0}) {
    const double xp = 1.0 - 4.0 / L;
    CHECK_FALSE(descent_condition_holds(2 * xp * xp, 2.0, vec({4}), vec({xp - 1}), L));
  }
  CHECK(descent_condition_holds(0.0, 2.0, vec({4}), vec({-1}), 4.0));

  const auto [r, est] = backtrack_step(p, vec({1}), LipschitzEstimate{1.0, 2.0});
  CHECK(est.current_L == 4.0);
  CHECK(r.x_plus[0] == doctest::Approx(0.0));
  CHECK(r.eta == 0.25);
  CHECK(r.prox_calls == 3);
}

TEST_CASE("backtracking accepts a correct hint immediately") {
  CompositeProblem p(testing::half_norm_sq(1), zero_prox(), 1);
  const auto [r, est] = backtrack_step(p, vec({1}), initial_lipschitz(p.f()));
  CHECK(est.current_L == 1.0);
  CHECK(r.prox_calls == 1);
  CHECK(r.x_plus[0] == 0.0);

  const auto [r0, est0] = backtrack_step(p, vec({0}), LipschitzEstimate{0.125, 2.0});
  CHECK(r0.x_plus[0] == 0.0);
  CHECK(est0.current_L == 0.125);
}

TEST_CASE("backtracking never decreases L and gives up on nonsmooth f") {
  std::mt19937_64 rng(11);
  CompositeProblem p(testing::shifted_quadratic(vec({1, 2}), 5.0), testing::l1(0.1, 2), 2);
  LipschitzEstimate est{0.5, 2.0};
  for (int i = 0; i < 30; ++i) {
    const auto [r, next] = backtrack_step(p, testing::random_vector(rng, 2), est);
    CHECK(next.current_L >= est.current_L);
    est = next;
  }

  SmoothOracle kink;
  kink.value = [](const Vector& x) { return x[0] >= 0.5 ? 0.0 : 1.0; };
  kink.gradient = [](const Vector& x) -> Vector { return Vector::Zero(x.size()); };
  CompositeProblem q(kink, ProxOracle{[](const Vector&) { return 0.0; },
                                      [](const Vector& u, double eta) -> Vector {
                                        return u - std::sqrt(eta) * Vector::Ones(u.size());
                                      }},
                     1);
  CHECK_THROWS_AS(backtrack_step(q, vec({0.5}), LipschitzEstimate{}),
                  LipschitzSearchFailure);
}

TEST_CASE("prox_gradient_norm") {
  CompositeProblem lasso(testing::shifted_quadratic(vec({3})), testing::l1(1.0, 1), 1);
  CHECK(prox_gradient_norm(lasso, vec({2}), 1.0) == doctest::Approx(0.0));
  CompositeProblem q(testing::half_norm_sq(2), zero_prox(), 2);
  CHECK(prox_gradient_norm(q, vec({3, 4}), 1.0) == doctest::Approx(5.0));
  CHECK(prox_gradient_norm(q, vec({3, 4}), 0.5) >= prox_gradient_norm(q, vec({3, 4}), 1.0));
}

TEST_CASE("prox gradient norm is non-increasing in eta") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> unif(0.01, 2.0);
  for (int trial = 0; trial < 200; ++trial) {
    const Vector c = testing::random_vector(rng, 3, 2.0);
    CompositeProblem p(testing::shifted_quadratic(c, unif(rng)),
                       make_regularizer(trial % 2 ? RegularizerKind::l1(unif(rng))
                                                  : RegularizerKind::linf(unif(rng)),
                                        3),
                       3);
    const Vector x = testing::random_vector(rng, 3, 3.0);
    double e1 = unif(rng);
    double e2 = unif(rng);
    if (e1 > e2) std::swap(e1, e2);
    CHECK(prox_gradient_norm(p, x, e1) >= prox_gradient_norm(p, x, e2) - 1e-12);
  }
}

TEST_CASE("sufficient decrease for eta <= 1/L") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> unif(0.1, 3.0);
  for (int trial = 0; trial < 200; ++trial) {
    const double L = unif(rng);
    CompositeProblem p(testing::shifted_quadratic(testing::random_vector(rng, 3), L),
                       testing::l1(unif(rng), 3), 3);
    const Vector x = testing::random_vector(rng, 3, 3.0);
    const double eta = (1.0 / L) * std::uniform_real_distribution<double>(0.05, 1.0)(rng);
    const auto r = prox_grad_map(p, x, eta);
    const double drop = p.objective(x) - p.objective(r.x_plus);
    CHECK(drop >= 0.5 * eta * r.prox_grad.squaredNorm() - 1e-12);
  }
}

}
