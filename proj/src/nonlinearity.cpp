#include "rnnlinz/nonlinearity.hpp"

#include <cmath>

#include <fmt/format.h>

#include "rnnlinz/errors.hpp"

namespace rnnlinz {

namespace {

// Values closer than this to the edge of the range of g are rejected by inverse().
constexpr double kRangeMargin = 1e-12;

void require_finite(const Eigen::VectorXd& v, const char* what) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i])) {
      throw DomainError(fmt::format("{}: non-finite entry at index {}", what, i));
    }
  }
}

double logistic(double z) {
  // Split by sign so exp() never overflows.
  if (z >= 0.0) {
    return 1.0 / (1.0 + std::exp(-z));
  }
  const double e = std::exp(z);
  return e / (1.0 + e);
}

}  // namespace

Nonlinearity::Nonlinearity(NonlinearityKind kind, double gain) : kind_(kind), gain_(gain) {
  if (!(gain > 0.0) || !std::isfinite(gain)) {
    throw DomainError(fmt::format("nonlinearity gain must be finite and positive, got {}", gain));
  }
}

Nonlinearity Nonlinearity::from_name(std::string_view name, double gain) {
  if (name == "tanh") return Nonlinearity(NonlinearityKind::Tanh, gain);
  if (name == "logistic") return Nonlinearity(NonlinearityKind::Logistic, gain);
  if (name == "identity") return Nonlinearity(NonlinearityKind::Identity, gain);
  throw DomainError(fmt::format("unknown nonlinearity kind '{}'", name));
}

std::string Nonlinearity::name() const {
  switch (kind_) {
    case NonlinearityKind::Tanh:
      return "tanh";
    case NonlinearityKind::Logistic:
      return "logistic";
    case NonlinearityKind::Identity:
      return "identity";
  }
  return "unknown";
}

double Nonlinearity::value(double x) const noexcept {
  const double z = gain_ * x;
  switch (kind_) {
    case NonlinearityKind::Tanh:
      return std::tanh(z);
    case NonlinearityKind::Logistic:
      return logistic(z);
    case NonlinearityKind::Identity:
      return z;
  }
  return z;
}

double Nonlinearity::slope(double x) const noexcept {
  const double z = gain_ * x;
  switch (kind_) {
    case NonlinearityKind::Tanh: {
      // sech^2 via cosh keeps full relative precision in the tails, where
      // 1 - tanh^2 cancels to zero.
      const double ch = std::cosh(z);
      return gain_ / (ch * ch);
    }
    case NonlinearityKind::Logistic: {
      const double s = logistic(z);
      const double one_minus = logistic(-z);
      return gain_ * s * one_minus;
    }
    case NonlinearityKind::Identity:
      return gain_;
  }
  return gain_;
}

Eigen::VectorXd Nonlinearity::apply(const Eigen::VectorXd& x) const {
  require_finite(x, "apply");
  return x.unaryExpr([this](double v) { return value(v); });
}

Eigen::VectorXd Nonlinearity::derivative(const Eigen::VectorXd& x) const {
  require_finite(x, "derivative");
  return x.unaryExpr([this](double v) { return slope(v); });
}

Eigen::VectorXd Nonlinearity::inverse(const Eigen::VectorXd& r) const {
  require_finite(r, "inverse");
  Eigen::VectorXd out(r.size());
  for (Eigen::Index i = 0; i < r.size(); ++i) {
    const double v = r[i];
    const auto idx = static_cast<std::size_t>(i);
    switch (kind_) {
      case NonlinearityKind::Tanh:
        if (!(std::abs(v) < 1.0 - kRangeMargin)) {
          throw RangeError(idx, fmt::format("inverse(tanh): r[{}] = {} is outside (-1, 1)", i, v));
        }
        out[i] = std::atanh(v) / gain_;
        break;
      case NonlinearityKind::Logistic:
        if (!(v > kRangeMargin && v < 1.0 - kRangeMargin)) {
          throw RangeError(idx, fmt::format("inverse(logistic): r[{}] = {} is outside (0, 1)", i, v));
        }
        // log(r / (1 - r)) as a difference of logs; log1p keeps precision near 0.
        out[i] = (std::log(v) - std::log1p(-v)) / gain_;
        break;
      case NonlinearityKind::Identity:
        out[i] = v / gain_;
        break;
    }
  }
  return out;
}

}  // namespace rnnlinz
