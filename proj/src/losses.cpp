#include "adaagc/losses.hpp"

#include <cmath>

namespace adaagc {

LossKind LossKind::huber(double delta) {
  if (!(delta > 0.0) || !std::isfinite(delta)) {
    throw InvalidConfiguration("huber delta must be positive");
  }
  return {Tag::huber, delta, 2};
}

LossKind LossKind::power(int p) {
  if (p < 2 || p % 2 != 0) {
    throw InvalidConfiguration("power loss exponent must be an even integer "
                               ">= 2, got " + std::to_string(p));
  }
  return {Tag::power, 1.0, p};
}

std::string LossKind::name() const {
  switch (tag) {
    case Tag::square: return "square";
    case Tag::squared_hinge: return "squared_hinge";
    case Tag::huber: return "huber";
    case Tag::logistic: return "logistic";
    case Tag::power: return "power_" + std::to_string(p);
  }
  return "unknown";
}

double huber(double x, double delta) {
  const double a = std::abs(x);
  return a <= delta ? 0.5 * x * x : delta * a - 0.5 * delta * delta;
}

double huber_derivative(double x, double delta) {
  if (x > delta) return delta;
  if (x < -delta) return -delta;
  return x;
}

namespace {

void require_valid(const LossKind& kind) {
  if (kind.tag == LossKind::Tag::power && (kind.p < 2 || kind.p % 2 != 0)) {
    throw InvalidConfiguration("power loss exponent must be an even integer");
  }
  if (kind.tag == LossKind::Tag::huber && !(kind.delta > 0.0)) {
    throw InvalidConfiguration("huber delta must be positive");
  }
}

}  // namespace

double loss_value(const LossKind& kind, double z, double b) {
  require_valid(kind);
  switch (kind.tag) {
    case LossKind::Tag::square: {
      const double r = z - b;
      return r * r;
    }
    case LossKind::Tag::squared_hinge: {
      const double m = std::max(0.0, 1.0 - b * z);
      return m * m;
    }
    case LossKind::Tag::huber:
      return huber(z - b, kind.delta);
    case LossKind::Tag::logistic: {
      const double m = b * z;
      return std::log1p(std::exp(-std::abs(m))) + std::max(0.0, -m);
    }
    case LossKind::Tag::power:
      return std::pow(z - b, kind.p);
  }
  return 0.0;
}

double loss_derivative(const LossKind& kind, double z, double b) {
  require_valid(kind);
  switch (kind.tag) {
    case LossKind::Tag::square:
      return 2.0 * (z - b);
    case LossKind::Tag::squared_hinge: {
      const double m = 1.0 - b * z;
      return m > 0.0 ? -2.0 * b * m : 0.0;
    }
    case LossKind::Tag::huber:
      return huber_derivative(z - b, kind.delta);
    case LossKind::Tag::logistic: {
      // -b * sigmoid(-b z), evaluated without overflow.
      const double m = b * z;
      const double s = m >= 0.0 ? std::exp(-m) / (1.0 + std::exp(-m))
                                : 1.0 / (1.0 + std::exp(m));
      return -b * s;
    }
    case LossKind::Tag::power:
      return kind.p * std::pow(z - b, kind.p - 1);
  }
  return 0.0;
}

std::optional<double> curvature_bound(const LossKind& kind) {
  switch (kind.tag) {
    case LossKind::Tag::square:
    case LossKind::Tag::squared_hinge:
      return 2.0;
    case LossKind::Tag::huber:
      return 1.0;
    case LossKind::Tag::logistic:
      return 0.25;
    case LossKind::Tag::power:
      return std::nullopt;
  }
  return std::nullopt;
}

SmoothOracle make_empirical_loss(const LossKind& kind,
                                 std::shared_ptr<const LabeledDataset> data) {
  require_valid(kind);
  if (!data || data->n() == 0) {
    throw InvalidConfiguration("empirical loss needs a nonempty dataset");
  }
  if (data->labels.size() != data->n()) {
    throw DimensionMismatch("label count does not match row count");
  }
  if (kind.is_classification()) {
    for (Index i = 0; i < data->n(); ++i) {
      const double b = data->labels[i];
      if (b != 1.0 && b != -1.0) {
        throw InvalidConfiguration(
            kind.name() + " loss needs labels in {-1,+1}");
      }
    }
  }

  const double inv_n = 1.0 / static_cast<double>(data->n());
  auto check_dim = [data](const Vector& x) {
    if (x.size() != data->d()) {
      throw DimensionMismatch("point has dimension " +
                              std::to_string(x.size()) + ", data has " +
                              std::to_string(data->d()));
    }
  };

  SmoothOracle f;
  f.value = [kind, data, inv_n, check_dim](const Vector& x) {
    check_dim(x);
    const Vector z = data->rows * x;
    double sum = 0.0;
    for (Index i = 0; i < z.size(); ++i) {
      sum += loss_value(kind, z[i], data->labels[i]);
    }
    return sum * inv_n;
  };
  f.gradient = [kind, data, inv_n, check_dim](const Vector& x) {
    check_dim(x);
    Vector w = data->rows * x;
    for (Index i = 0; i < w.size(); ++i) {
      w[i] = loss_derivative(kind, w[i], data->labels[i]) * inv_n;
    }
    return Vector(data->rows.transpose() * w);
  };
  if (auto beta = curvature_bound(kind)) {
    const double row_mass = data->rows.squaredNorm();
    // An all-zero design makes f constant; any positive L is valid.
    f.lipschitz_hint = row_mass > 0.0 ? *beta * inv_n * row_mass : 1.0;
  }
  return f;
}

SmoothOracle make_empirical_loss(const LossKind& kind, LabeledDataset data) {
  return make_empirical_loss(
      kind, std::make_shared<const LabeledDataset>(std::move(data)));
}

}  // namespace adaagc
