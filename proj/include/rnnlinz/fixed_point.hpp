#pragma once

#include <vector>

#include <Eigen/Core>

#include "rnnlinz/rnn_core.hpp"

namespace rnnlinz {

inline constexpr double kDefaultFixedPointTol = 1e-12;
inline constexpr int kDefaultMaxNewtonIter = 100;
// Newton systems with a larger condition estimate are treated as singular.
inline constexpr double kSingularCondition = 1e14;

/// A point x0 with x0 = W g(x0) + c. Only constructible from a model, so the
/// activity r0 = g(x0) and the residual are always derived, never stored
/// independently.
class FixedPoint {
 public:
  FixedPoint(const RnnModel& model, Eigen::VectorXd x0, Eigen::VectorXd c, int iterations = 0,
             std::vector<double> residual_history = {});

  const Eigen::VectorXd& x0() const noexcept { return x0_; }
  const Eigen::VectorXd& r0() const noexcept { return r0_; }
  const Eigen::VectorXd& context() const noexcept { return c_; }
  /// ||W g(x0) + c - x0||_inf
  double residual() const noexcept { return residual_; }
  int iterations() const noexcept { return iterations_; }
  /// Residual before each Newton update and after the last one.
  const std::vector<double>& residual_history() const noexcept { return history_; }

 private:
  Eigen::VectorXd x0_;
  Eigen::VectorXd r0_;
  Eigen::VectorXd c_;
  double residual_;
  int iterations_;
  std::vector<double> history_;
};

/// ||W g(x) + c - x||_inf
double fixed_point_residual(const RnnModel& model, const Eigen::VectorXd& x, const Eigen::VectorXd& c);

/// Damped Newton on F(x) = W g(x) + c - x.
///
/// Each iteration solves (W D(x) - I) delta = -F(x) by LU with partial
/// pivoting and halves delta (at most 30 times) until the residual drops.
/// Throws NonConvergence when the residual is still above tol after max_iter
/// updates or when no damped step decreases it, and SingularJacobian when the
/// LU condition estimate exceeds 1e14.
FixedPoint find_fixed_point(const RnnModel& model, const Eigen::VectorXd& c, const Eigen::VectorXd& x_guess,
                            double tol = kDefaultFixedPointTol, int max_iter = kDefaultMaxNewtonIter);

/// Recomputes the residual of fp from scratch and compares it against tol.
bool verify_fixed_point(const RnnModel& model, const FixedPoint& fp, double tol);

}  // namespace rnnlinz
