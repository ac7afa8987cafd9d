#include "adaagc/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "adaagc/solvers.hpp"

namespace adaagc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kGoldenTol = 1e-10;
constexpr double kGridStop = 1e-10;
constexpr int kGridPoints = 81;
constexpr int kScanPoints = 65;

struct Minimum {
  double x = 0.0;
  double value = kInf;
};

// Golden section on a convex, possibly extended-valued function. When a probe
// lands outside the domain the bracket is first narrowed by a uniform scan.
Minimum golden_section(const std::function<double(double)>& h, double lo,
                       double hi) {
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = lo;
  double b = hi;
  double c = b - phi * (b - a);
  double d = a + phi * (b - a);
  double fc = h(c);
  double fd = h(d);
  if (!std::isfinite(fc) || !std::isfinite(fd)) {
    const double step = (hi - lo) / (kScanPoints - 1);
    Minimum best;
    int best_i = -1;
    for (int i = 0; i < kScanPoints; ++i) {
      const double x = lo + i * step;
      const double v = h(x);
      if (v < best.value) {
        best = {x, v};
        best_i = i;
      }
    }
    if (best_i < 0) return best;
    a = std::max(lo, best.x - step);
    b = std::min(hi, best.x + step);
    c = b - phi * (b - a);
    d = a + phi * (b - a);
    fc = h(c);
    fd = h(d);
    if (!std::isfinite(fc) && !std::isfinite(fd)) return best;
  }
  while (b - a > kGoldenTol) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - phi * (b - a);
      fc = h(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + phi * (b - a);
      fd = h(d);
    }
  }
  return fc <= fd ? Minimum{c, fc} : Minimum{d, fd};
}

double search_radius(const Vector& u) {
  return 10.0 * (1.0 + u.lpNorm<Eigen::Infinity>());
}

Vector separable_search(const ValueFn& g, const Vector& u, double eta) {
  const double R = search_radius(u);
  Vector out(u.size());
  Vector probe = Vector::Zero(u.size());
  for (Index i = 0; i < u.size(); ++i) {
    auto h = [&](double t) {
      probe[i] = t;
      return 0.5 * (t - u[i]) * (t - u[i]) + eta * g(probe);
    };
    out[i] = golden_section(h, -R, R).x;
    probe[i] = 0.0;
  }
  return out;
}

Vector grid_search(const ValueFn& g, const Vector& u, double eta) {
  const Index d = u.size();
  auto objective = [&](const Vector& x) {
    return 0.5 * (x - u).squaredNorm() + eta * g(x);
  };
  Vector center = Vector::Zero(d);
  double half = search_radius(u);
  Vector x(d);
  while (true) {
    const double h = 2.0 * half / (kGridPoints - 1);
    Vector best = center;
    double best_value = kInf;
    const int n1 = d == 2 ? kGridPoints : 1;
    for (int i = 0; i < kGridPoints; ++i) {
      x[0] = center[0] - half + i * h;
      for (int j = 0; j < n1; ++j) {
        if (d == 2) x[1] = center[1] - half + j * h;
        const double v = objective(x);
        if (v < best_value) {
          best_value = v;
          best = x;
        }
      }
    }
    if (!std::isfinite(best_value)) {
      throw OracleFailure("brute_prox: no finite point on the search grid");
    }
    center = best;
    if (h < kGridStop) return center;
    half = 5.0 * h;
  }
}

double nested_min(const ValueFn& g, const Vector& u, double eta, double R,
                  Vector& x, Index level) {
  const Index d = x.size();
  if (level == d) return 0.5 * (x - u).squaredNorm() + eta * g(x);
  auto h = [&](double t) {
    x[level] = t;
    return nested_min(g, u, eta, R, x, level + 1);
  };
  const Minimum m = golden_section(h, -R, R);
  x[level] = m.x;
  return m.value;
}

Vector nested_search(const ValueFn& g, const Vector& u, double eta) {
  const double R = search_radius(u);
  Vector x = Vector::Zero(u.size());
  // The innermost coordinates end up holding the argmin for the last probe of
  // the outer ones, so re-run the inner searches at the final outer value.
  nested_min(g, u, eta, R, x, 0);
  for (Index level = 1; level < x.size(); ++level) {
    nested_min(g, u, eta, R, x, level);
  }
  return x;
}

}  // namespace

Vector brute_prox(const ValueFn& g_value, const Vector& u, double eta,
                  ProxSearch search) {
  if (!(eta > 0.0)) throw InvalidConfiguration("eta must be positive");
  if (u.size() == 0 || !u.allFinite()) {
    throw InvalidConfiguration("brute_prox needs a finite nonempty point");
  }
  if (search == ProxSearch::separable) return separable_search(g_value, u, eta);
  if (u.size() > 3) {
    throw InvalidConfiguration("joint brute_prox supports d <= 3");
  }
  if (u.size() <= 2) return grid_search(g_value, u, eta);
  return nested_search(g_value, u, eta);
}

Vector finite_difference_gradient(const ValueFn& f, const Vector& x) {
  const double h = 1e-6 * (1.0 + x.lpNorm<Eigen::Infinity>());
  Vector grad(x.size());
  Vector probe = x;
  for (Index i = 0; i < x.size(); ++i) {
    probe[i] = x[i] + h;
    const double up = f(probe);
    probe[i] = x[i] - h;
    const double down = f(probe);
    probe[i] = x[i];
    grad[i] = (up - down) / (2.0 * h);
  }
  return grad;
}

SyntheticHeb make_quadratic_heb(double alpha, double L, Index d) {
  if (!(alpha > 0.0) || !(L >= alpha) || !std::isfinite(L)) {
    throw InvalidConfiguration("need 0 < alpha <= L");
  }
  if (d < 1) throw InvalidConfiguration("dimension must be positive");
  Vector lambda(d);
  for (Index i = 0; i < d; ++i) {
    lambda[i] = d == 1 ? alpha
                       : alpha + (L - alpha) * static_cast<double>(i) /
                                     static_cast<double>(d - 1);
  }
  SmoothOracle f;
  f.value = [lambda](const Vector& x) {
    return 0.5 * x.dot(lambda.cwiseProduct(x));
  };
  f.gradient = [lambda](const Vector& x) -> Vector {
    return lambda.cwiseProduct(x);
  };
  f.lipschitz_hint = lambda.maxCoeff();
  return SyntheticHeb{CompositeProblem(std::move(f), zero_prox(), d), 0.5,
                      std::sqrt(2.0 / alpha), Vector::Zero(d), 0.0,
                      lambda.maxCoeff()};
}

SyntheticHeb make_power_heb(int p, Index d) {
  if (p < 2 || p % 2 != 0) {
    throw InvalidConfiguration("power exponent must be an even integer >= 2");
  }
  if (d < 1) throw InvalidConfiguration("dimension must be positive");
  const double scale = 1.0 / static_cast<double>(d);
  SmoothOracle f;
  f.value = [p, scale](const Vector& x) {
    return scale * x.array().pow(p).sum();
  };
  f.gradient = [p, scale](const Vector& x) -> Vector {
    return (scale * p) * x.array().pow(p - 1).matrix();
  };
  const double theta = 1.0 / p;

  auto ratio = [&](const Vector& x) {
    return x.norm() / std::pow(f.value(x), theta);
  };
  std::mt19937_64 rng(20170301);
  std::normal_distribution<double> normal;
  double c = ratio(Vector::Ones(d));
  for (int k = 0; k < 4096; ++k) {
    Vector x(d);
    for (Index i = 0; i < d; ++i) x[i] = normal(rng);
    if (x.norm() > 0.0) c = std::max(c, ratio(x));
  }
  const double L = p == 2 ? 2.0 * scale : 0.0;
  return SyntheticHeb{CompositeProblem(std::move(f), zero_prox(), d), theta,
                      c, Vector::Zero(d), 0.0, L};
}

ReferenceSolution least_squares_reference(const Eigen::MatrixXd& A,
                                          const Vector& b) {
  if (A.rows() == 0 || A.rows() != b.size()) {
    throw DimensionMismatch("least squares needs A with n = |b| > 0 rows");
  }
  const Eigen::MatrixXd M = A.transpose() * A;
  const Vector rhs = A.transpose() * b;
  Eigen::LDLT<Eigen::MatrixXd> ldlt(M);
  const Vector D = ldlt.vectorD();
  const double dmax = D.cwiseAbs().maxCoeff();
  Vector x;
  if (ldlt.info() == Eigen::Success && D.minCoeff() > 1e-12 * dmax) {
    x = ldlt.solve(rhs);
  } else {
    const Eigen::MatrixXd ridge =
        M + 1e-12 * Eigen::MatrixXd::Identity(M.rows(), M.cols());
    x = ridge.ldlt().solve(rhs);
  }
  const double F = (A * x - b).squaredNorm() / static_cast<double>(A.rows());
  return {std::move(x), F};
}

ReferenceSolution least_squares_reference(const LabeledDataset& data) {
  return least_squares_reference(Eigen::MatrixXd(data.rows), data.labels);
}

ReferenceSolution reference_solution(const CompositeProblem& problem,
                                     const Vector& x0, double target_eps,
                                     std::int64_t max_prox_calls) {
  SolverConfig cfg;
  cfg.target_eps = target_eps;
  cfg.max_prox_calls = max_prox_calls;
  cfg.record_iterations = false;
  const RunTrace tr = pg(problem, x0, cfg, PgOption::I);
  if (tr.status == RunStatus::failed) {
    throw Error("reference solve failed: " + tr.message);
  }
  return {tr.solution, problem.objective(tr.solution)};
}

}  // namespace adaagc
