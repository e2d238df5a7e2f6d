#include "rnnlinz/fixed_point.hpp"

#include <cmath>
#include <limits>

#include <Eigen/LU>
#include <fmt/format.h>

#include "rnnlinz/errors.hpp"

namespace rnnlinz {

namespace {

constexpr int kMaxHalvings = 30;

}  // namespace

FixedPoint::FixedPoint(const RnnModel& model, Eigen::VectorXd x0, Eigen::VectorXd c, int iterations,
                       std::vector<double> residual_history)
    : x0_(std::move(x0)), c_(std::move(c)), iterations_(iterations), history_(std::move(residual_history)) {
  require_length(x0_, model.size(), "fixed point x0");
  require_length(c_, model.size(), "context c");
  r0_ = model.nonlinearity().apply(x0_);
  residual_ = (model.weights() * r0_ + c_ - x0_).lpNorm<Eigen::Infinity>();
}

double fixed_point_residual(const RnnModel& model, const Eigen::VectorXd& x, const Eigen::VectorXd& c) {
  return (model.weights() * model.nonlinearity().apply(x) + c - x).lpNorm<Eigen::Infinity>();
}

FixedPoint find_fixed_point(const RnnModel& model, const Eigen::VectorXd& c, const Eigen::VectorXd& x_guess,
                            double tol, int max_iter) {
  if (!(tol > 0.0)) {
    throw DomainError(fmt::format("fixed-point tolerance must be positive, got {}", tol));
  }
  if (max_iter < 1) {
    throw DomainError(fmt::format("max_iter must be at least 1, got {}", max_iter));
  }
  const auto n = model.size();
  require_length(c, n, "context c");
  require_length(x_guess, n, "x_guess");
  if (!c.allFinite() || !x_guess.allFinite()) {
    throw DomainError("context and initial guess must be finite");
  }

  const auto& W = model.weights();
  const auto& nl = model.nonlinearity();
  const Eigen::MatrixXd identity = Eigen::MatrixXd::Identity(n, n);

  Eigen::VectorXd x = x_guess;
  Eigen::VectorXd F = W * nl.apply(x) + c - x;
  double res = F.lpNorm<Eigen::Infinity>();
  std::vector<double> history{res};

  int iter = 0;
  while (res > tol) {
    if (iter == max_iter) {
      throw NonConvergence(res, iter);
    }
    const Eigen::MatrixXd J = W * nl.derivative(x).asDiagonal() - identity;
    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(J);
    const double rcond = lu.rcond();
    if (!(rcond > 1.0 / kSingularCondition)) {
      throw SingularJacobian(rcond > 0.0 ? 1.0 / rcond : std::numeric_limits<double>::infinity(), iter);
    }
    Eigen::VectorXd delta = lu.solve(-F);

    bool accepted = false;
    for (int h = 0; h <= kMaxHalvings; ++h) {
      Eigen::VectorXd trial = x + delta;
      if (trial.allFinite()) {
        Eigen::VectorXd trial_F = W * nl.apply(trial) + c - trial;
        const double trial_res = trial_F.lpNorm<Eigen::Infinity>();
        if (trial_res < res) {
          x = std::move(trial);
          F = std::move(trial_F);
          res = trial_res;
          accepted = true;
          break;
        }
      }
      delta *= 0.5;
    }
    ++iter;
    if (!accepted) {
      throw NonConvergence(res, iter);
    }
    history.push_back(res);
  }
  return FixedPoint(model, std::move(x), c, iter, std::move(history));
}

bool verify_fixed_point(const RnnModel& model, const FixedPoint& fp, double tol) {
  if (fp.x0().size() != model.size() || fp.context().size() != model.size()) {
    throw ShapeError("fixed point dimension does not match model");
  }
  return fixed_point_residual(model, fp.x0(), fp.context()) <= tol;
}

}  // namespace rnnlinz
