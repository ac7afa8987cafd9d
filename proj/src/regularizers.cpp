#include "adaagc/regularizers.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

#include "adaagc/losses.hpp"

namespace adaagc {

namespace {

void require_positive(double value, const char* what) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw InvalidConfiguration(std::string(what) + " must be positive");
  }
}

void validate_groups(const std::vector<Index>& bounds, Index dimension) {
  if (bounds.size() < 2 || bounds.front() != 0 ||
      (dimension >= 0 && bounds.back() != dimension)) {
    throw InvalidConfiguration("group bounds must start at 0 and end at d");
  }
  for (std::size_t i = 1; i < bounds.size(); ++i) {
    if (bounds[i] <= bounds[i - 1]) {
      throw InvalidConfiguration("group bounds must be strictly increasing");
    }
  }
}

}  // namespace

RegularizerKind RegularizerKind::l1(double lambda) {
  require_positive(lambda, "lambda");
  RegularizerKind k;
  k.tag = Tag::l1;
  k.lambda = lambda;
  return k;
}

RegularizerKind RegularizerKind::linf(double lambda) {
  require_positive(lambda, "lambda");
  RegularizerKind k;
  k.tag = Tag::linf;
  k.lambda = lambda;
  return k;
}

RegularizerKind RegularizerKind::l1inf_groups(double lambda,
                                              std::vector<Index> bounds) {
  require_positive(lambda, "lambda");
  validate_groups(bounds, -1);
  RegularizerKind k;
  k.tag = Tag::l1inf_groups;
  k.lambda = lambda;
  k.group_bounds = std::move(bounds);
  return k;
}

RegularizerKind RegularizerKind::huber_norm(double lambda, double delta) {
  require_positive(lambda, "lambda");
  require_positive(delta, "huber delta");
  RegularizerKind k;
  k.tag = Tag::huber_norm;
  k.lambda = lambda;
  k.delta = delta;
  return k;
}

RegularizerKind RegularizerKind::l1_ball(double radius) {
  require_positive(radius, "l1 ball radius");
  RegularizerKind k;
  k.tag = Tag::l1_ball;
  k.radius = radius;
  return k;
}

std::string RegularizerKind::name() const {
  switch (tag) {
    case Tag::l1: return "l1";
    case Tag::linf: return "linf";
    case Tag::l1inf_groups: return "l1inf_groups";
    case Tag::huber_norm: return "huber_norm";
    case Tag::l1_ball: return "l1_ball";
  }
  return "unknown";
}

Vector prox_l1(const Vector& v, double t) {
  require_positive(t, "prox parameter");
  return v.unaryExpr([t](double x) {
    const double m = std::abs(x) - t;
    return m > 0.0 ? std::copysign(m, x) : 0.0;
  });
}

Vector project_l1_ball(const Vector& v, double s) {
  require_positive(s, "l1 ball radius");
  if (v.lpNorm<1>() <= s) return v;

  std::vector<double> mags(static_cast<std::size_t>(v.size()));
  for (Index i = 0; i < v.size(); ++i) mags[i] = std::abs(v[i]);
  std::sort(mags.begin(), mags.end(), std::greater<>());

  // Largest j with mags[j] > (sum_{i<=j} mags[i] - s) / (j + 1).
  double cumulative = 0.0;
  double tau = 0.0;
  for (std::size_t j = 0; j < mags.size(); ++j) {
    cumulative += mags[j];
    const double candidate = (cumulative - s) / static_cast<double>(j + 1);
    if (mags[j] > candidate) {
      tau = candidate;
    } else {
      break;
    }
  }
  return v.unaryExpr([tau](double x) {
    const double m = std::abs(x) - tau;
    return m > 0.0 ? std::copysign(m, x) : 0.0;
  });
}

Vector prox_linf(const Vector& v, double t) {
  require_positive(t, "prox parameter");
  if (v.lpNorm<1>() <= t) return Vector::Zero(v.size());
  return v - t * project_l1_ball(v / t, 1.0);
}

Vector prox_l1inf_groups(const Vector& v, double t,
                         const std::vector<Index>& group_bounds) {
  validate_groups(group_bounds, v.size());
  Vector out(v.size());
  for (std::size_t i = 0; i + 1 < group_bounds.size(); ++i) {
    const Index start = group_bounds[i];
    const Index len = group_bounds[i + 1] - start;
    out.segment(start, len) = prox_linf(v.segment(start, len), t);
  }
  return out;
}

Vector prox_huber_norm(const Vector& v, double t, double delta) {
  require_positive(t, "prox parameter");
  require_positive(delta, "huber delta");
  const double shrink = 1.0 + t;
  return v.unaryExpr([=](double x) {
    const double a = std::abs(x);
    if (a / shrink <= delta) return x / shrink;
    return std::copysign(a - t * delta, x);
  });
}

Vector prox_augmented(const ProxOracle& g, const Vector& u, double eta,
                      double delta, const Vector& anchor) {
  require_positive(eta, "prox parameter");
  if (!(delta >= 0.0)) throw InvalidConfiguration("delta must be >= 0");
  const double w = eta * delta;
  return g.prox((u + w * anchor) / (1.0 + w), eta / (1.0 + w));
}

Vector dual_averaging_min(const ProxOracle& g, const Vector& accumulated_grad,
                          double A, double delta, const Vector& anchor) {
  require_positive(A, "dual averaging weight");
  if (!(delta >= 0.0)) throw InvalidConfiguration("delta must be >= 0");
  const double w = 1.0 + A * delta;
  return g.prox(anchor - accumulated_grad / w, A / w);
}

ProxOracle make_augmented(ProxOracle g, double delta, Vector anchor) {
  if (!(delta >= 0.0)) throw InvalidConfiguration("delta must be >= 0");
  ProxOracle out;
  out.value = [g, delta, anchor](const Vector& x) {
    return g.value(x) + 0.5 * delta * (x - anchor).squaredNorm();
  };
  out.prox = [g, delta, anchor](const Vector& u, double eta) {
    return prox_augmented(g, u, eta, delta, anchor);
  };
  return out;
}

ProxOracle make_regularizer(const RegularizerKind& kind, Index dimension) {
  using Tag = RegularizerKind::Tag;
  if (kind.tag != Tag::l1_ball) require_positive(kind.lambda, "lambda");
  const double lambda = kind.lambda;
  ProxOracle g;
  switch (kind.tag) {
    case Tag::l1:
      g.value = [lambda](const Vector& x) { return lambda * x.lpNorm<1>(); };
      g.prox = [lambda](const Vector& u, double eta) {
        return prox_l1(u, eta * lambda);
      };
      break;
    case Tag::linf:
      g.value = [lambda](const Vector& x) {
        return lambda * x.lpNorm<Eigen::Infinity>();
      };
      g.prox = [lambda](const Vector& u, double eta) {
        return prox_linf(u, eta * lambda);
      };
      break;
    case Tag::l1inf_groups: {
      validate_groups(kind.group_bounds, dimension);
      const auto bounds = kind.group_bounds;
      g.value = [lambda, bounds](const Vector& x) {
        double sum = 0.0;
        for (std::size_t i = 0; i + 1 < bounds.size(); ++i) {
          sum += x.segment(bounds[i], bounds[i + 1] - bounds[i])
                     .lpNorm<Eigen::Infinity>();
        }
        return lambda * sum;
      };
      g.prox = [lambda, bounds](const Vector& u, double eta) {
        return prox_l1inf_groups(u, eta * lambda, bounds);
      };
      break;
    }
    case Tag::huber_norm: {
      require_positive(kind.delta, "huber delta");
      const double delta = kind.delta;
      g.value = [lambda, delta](const Vector& x) {
        double sum = 0.0;
        for (Index i = 0; i < x.size(); ++i) sum += huber(x[i], delta);
        return lambda * sum;
      };
      g.prox = [lambda, delta](const Vector& u, double eta) {
        return prox_huber_norm(u, eta * lambda, delta);
      };
      break;
    }
    case Tag::l1_ball: {
      require_positive(kind.radius, "l1 ball radius");
      const double s = kind.radius;
      const double tol = 1e-9 * std::max(1.0, s);
      g.value = [s, tol](const Vector& x) {
        return x.lpNorm<1>() <= s + tol
                   ? 0.0
                   : std::numeric_limits<double>::infinity();
      };
      g.prox = [s](const Vector& u, double) { return project_l1_ball(u, s); };
      break;
    }
  }
  return g;
}

}  // namespace adaagc
