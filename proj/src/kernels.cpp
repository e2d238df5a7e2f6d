#include "rnnlinz/kernels.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

#include <fmt/format.h>

#include "rnnlinz/errors.hpp"

namespace rnnlinz::kernels {

namespace {

void check_scale_shapes(const Eigen::MatrixXd& W, const Eigen::VectorXd& d) {
  if (W.rows() != W.cols() || d.size() != W.rows()) {
    throw ShapeError(fmt::format("cannot scale a {}x{} matrix by a diagonal of length {}", W.rows(), W.cols(),
                                 d.size()));
  }
}

Eigen::VectorXd difference_column(const VectorMap& f, const Eigen::VectorXd& x, double h, Eigen::Index j) {
  Eigen::VectorXd plus = x;
  Eigen::VectorXd minus = x;
  plus[j] += h;
  minus[j] -= h;
  return (f(plus) - f(minus)) / (2.0 * h);
}

}  // namespace

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

Eigen::MatrixXd scale_columns(const Eigen::MatrixXd& W, const Eigen::VectorXd& d) {
  check_scale_shapes(W, d);
  const Eigen::Index n = W.rows();
  if (n < kParallelThreshold) return serial::scale_columns(W, d);
  Eigen::MatrixXd out(n, n);
#pragma omp parallel for schedule(static)
  for (Eigen::Index j = 0; j < n; ++j) {
    out.col(j) = W.col(j) * d[j];
  }
  return out;
}

Eigen::MatrixXd scale_rows(const Eigen::VectorXd& d, const Eigen::MatrixXd& W) {
  check_scale_shapes(W, d);
  const Eigen::Index n = W.rows();
  if (n < kParallelThreshold) return serial::scale_rows(d, W);
  Eigen::MatrixXd out(n, n);
  // Column-major storage: sweep columns in parallel, scale each entry by its row gain.
#pragma omp parallel for schedule(static)
  for (Eigen::Index j = 0; j < n; ++j) {
    out.col(j) = W.col(j).cwiseProduct(d);
  }
  return out;
}

Eigen::MatrixXd central_difference_jacobian(const VectorMap& f, const Eigen::VectorXd& x, double h) {
  if (!(h > 0.0)) {
    throw DomainError("finite-difference step must be positive");
  }
  const Eigen::Index n = x.size();
  if (n < 8) return serial::central_difference_jacobian(f, x, h);
  const Eigen::Index m = f(x).size();
  Eigen::MatrixXd J(m, n);
  // One column per perturbed coordinate; f is evaluated 2n times.
#pragma omp parallel for schedule(dynamic)
  for (Eigen::Index j = 0; j < n; ++j) {
    J.col(j) = difference_column(f, x, h, j);
  }
  return J;
}

namespace serial {

Eigen::MatrixXd scale_columns(const Eigen::MatrixXd& W, const Eigen::VectorXd& d) {
  check_scale_shapes(W, d);
  const Eigen::Index n = W.rows();
  Eigen::MatrixXd out(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      out(i, j) = W(i, j) * d[j];
    }
  }
  return out;
}

Eigen::MatrixXd scale_rows(const Eigen::VectorXd& d, const Eigen::MatrixXd& W) {
  check_scale_shapes(W, d);
  const Eigen::Index n = W.rows();
  Eigen::MatrixXd out(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      out(i, j) = d[i] * W(i, j);
    }
  }
  return out;
}

Eigen::MatrixXd central_difference_jacobian(const VectorMap& f, const Eigen::VectorXd& x, double h) {
  if (!(h > 0.0)) {
    throw DomainError("finite-difference step must be positive");
  }
  const Eigen::Index n = x.size();
  Eigen::MatrixXd J(f(x).size(), n);
  for (Eigen::Index j = 0; j < n; ++j) {
    J.col(j) = difference_column(f, x, h, j);
  }
  return J;
}

}  // namespace serial

}  // namespace rnnlinz::kernels
