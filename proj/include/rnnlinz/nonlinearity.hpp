#pragma once

#include <string>
#include <string_view>

#include <Eigen/Core>

namespace rnnlinz {

enum class NonlinearityKind { Tanh, Logistic, Identity };

/// Pointwise, strictly increasing, invertible nonlinearity g with its
/// closed-form derivative and inverse.
///
/// `gain` scales the argument: g(x) = f(gain * x). It defaults to 1 and must
/// be positive so that g' > 0 everywhere.
class Nonlinearity {
 public:
  explicit Nonlinearity(NonlinearityKind kind = NonlinearityKind::Tanh, double gain = 1.0);

  static Nonlinearity from_name(std::string_view name, double gain = 1.0);

  NonlinearityKind kind() const noexcept { return kind_; }
  double gain() const noexcept { return gain_; }
  std::string name() const;

  // Scalar forms; no finiteness checks.
  double value(double x) const noexcept;
  double slope(double x) const noexcept;

  /// Elementwise g(x). Throws DomainError on non-finite input.
  Eigen::VectorXd apply(const Eigen::VectorXd& x) const;
  /// Elementwise g'(x). Throws DomainError on non-finite input.
  Eigen::VectorXd derivative(const Eigen::VectorXd& x) const;
  /// Elementwise g^-1(r). Throws RangeError naming the first index that is
  /// not strictly inside the range of g (with a 1e-12 margin).
  Eigen::VectorXd inverse(const Eigen::VectorXd& r) const;

  friend bool operator==(const Nonlinearity&, const Nonlinearity&) = default;

 private:
  NonlinearityKind kind_;
  double gain_;
};

}  // namespace rnnlinz
