#pragma once

#include <functional>

#include <Eigen/Core>

// Data-parallel building blocks. Every kernel in rnnlinz::kernels has a
// plain loop twin in rnnlinz::kernels::serial that computes bit-identical
// results; the tests compare the two and bench/ times them.
namespace rnnlinz::kernels {

using VectorMap = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

// Below this dimension the OpenMP kernels run on the calling thread.
inline constexpr Eigen::Index kParallelThreshold = 64;

/// W * diag(d): column j of W scaled by d[j].
Eigen::MatrixXd scale_columns(const Eigen::MatrixXd& W, const Eigen::VectorXd& d);

/// diag(d) * W: row i of W scaled by d[i].
Eigen::MatrixXd scale_rows(const Eigen::VectorXd& d, const Eigen::MatrixXd& W);

/// Central-difference Jacobian of f at x, one column per perturbed
/// coordinate: (f(x + h e_j) - f(x - h e_j)) / 2h. f must be safe to call
/// concurrently.
Eigen::MatrixXd central_difference_jacobian(const VectorMap& f, const Eigen::VectorXd& x, double h);

/// Number of OpenMP threads the kernels would use (1 without OpenMP).
int max_threads();

namespace serial {

Eigen::MatrixXd scale_columns(const Eigen::MatrixXd& W, const Eigen::VectorXd& d);
Eigen::MatrixXd scale_rows(const Eigen::VectorXd& d, const Eigen::MatrixXd& W);
Eigen::MatrixXd central_difference_jacobian(const VectorMap& f, const Eigen::VectorXd& x, double h);

}  // namespace serial

}  // namespace rnnlinz::kernels
