#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Core>

#include "rnnlinz/fixed_point.hpp"
#include "rnnlinz/rnn_core.hpp"

namespace rnnlinz {

// Gains at or below this magnitude cannot be inverted.
inline constexpr double kMinInvertibleGain = 1e-12;

/// Diagonal gain matrix D, D_jj = g'(x0_j), stored as its diagonal.
struct GainMatrix {
  Eigen::VectorXd diag;

  Eigen::Index size() const noexcept { return diag.size(); }
  Eigen::MatrixXd dense() const { return diag.asDiagonal(); }
  /// Throws NearZeroGain for the first |D_jj| <= 1e-12.
  void require_invertible() const;
};

enum class LinearizationVariant { ActivationSpace, ActivitySpace };

/// Deviation dynamics  s^{k+1} = A s^k + B u^k  around a fixed point.
///   ActivationSpace: s = x - x0, A = W D, B = I
///   ActivitySpace:   s = r - r0, A = D W, B = D
struct LinearizedSystem {
  LinearizationVariant variant;
  Eigen::MatrixXd A;
  Eigen::MatrixXd B;
  FixedPoint base;
};

struct EquivalenceReport {
  std::vector<double> step_gap;  // ||D x^k - r^k||_inf for k = 0..horizon
  double max_gap = 0.0;
  double max_activity_norm = 0.0;  // max_k ||r^k||_inf
  double tol = 0.0;
  double threshold = 0.0;  // tol * (1 + max_activity_norm)
  bool passed = false;
};

GainMatrix gain_matrix(const RnnModel& model, const FixedPoint& fp);

/// A = W D (columns of W scaled by the gains), B = I.
LinearizedSystem linearize_activation(const RnnModel& model, const FixedPoint& fp);

/// A = D W (rows of W scaled by the gains), B = D.
LinearizedSystem linearize_activity(const RnnModel& model, const FixedPoint& fp);

/// Iterates the deviation recursion from dev_init. The trajectory kind follows
/// the variant. Throws DivergenceError like simulate().
Trajectory simulate_linear(const LinearizedSystem& sys, const Eigen::VectorXd& dev_init, const InputSequence& inputs,
                           std::size_t horizon);

Trajectory map_x_to_r(const GainMatrix& D, const Trajectory& x_traj);
Trajectory map_r_to_x(const GainMatrix& D, const Trajectory& r_traj);

/// Simulates both linearizations independently (the activity one started at
/// D dev_init) and measures ||D x^k - r^k||_inf at every step. Passes iff the
/// largest gap is within tol * (1 + max_k ||r^k||_inf).
EquivalenceReport check_equivalence(const RnnModel& model, const FixedPoint& fp, const Eigen::VectorXd& dev_init,
                                    const InputSequence& inputs, std::size_t horizon, double tol);

/// max_{k<=horizon} ||(x^k_kicked - x^k_rest) - x^k_linear||_inf for a kick of
/// size epsilon along a unit direction, with zero input. x^k_rest starts at x0,
/// so the result is exactly 0 for epsilon = 0. Second order in epsilon.
double linearization_error(const RnnModel& model, const FixedPoint& fp, const Eigen::VectorXd& direction,
                           double epsilon, std::size_t horizon);

/// Finite-difference Jacobians of the activation map x -> W g(x) + c at x0
/// and the activity map r -> g(W r + c) at r0. Independent of gain_matrix().
Eigen::MatrixXd activation_jacobian_fd(const RnnModel& model, const FixedPoint& fp, double h);
Eigen::MatrixXd activity_jacobian_fd(const RnnModel& model, const FixedPoint& fp, double h);

}  // namespace rnnlinz
