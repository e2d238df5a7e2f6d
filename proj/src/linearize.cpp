#include "rnnlinz/linearize.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "rnnlinz/errors.hpp"
#include "rnnlinz/kernels.hpp"

namespace rnnlinz {

void GainMatrix::require_invertible() const {
  for (Eigen::Index j = 0; j < diag.size(); ++j) {
    if (!(std::abs(diag[j]) > kMinInvertibleGain)) {
      throw NearZeroGain(static_cast<std::size_t>(j), diag[j]);
    }
  }
}

GainMatrix gain_matrix(const RnnModel& model, const FixedPoint& fp) {
  require_length(fp.x0(), model.size(), "fixed point x0");
  return GainMatrix{model.nonlinearity().derivative(fp.x0())};
}

LinearizedSystem linearize_activation(const RnnModel& model, const FixedPoint& fp) {
  const GainMatrix D = gain_matrix(model, fp);
  const auto n = model.size();
  return LinearizedSystem{LinearizationVariant::ActivationSpace, kernels::scale_columns(model.weights(), D.diag),
                          Eigen::MatrixXd::Identity(n, n), fp};
}

LinearizedSystem linearize_activity(const RnnModel& model, const FixedPoint& fp) {
  const GainMatrix D = gain_matrix(model, fp);
  return LinearizedSystem{LinearizationVariant::ActivitySpace, kernels::scale_rows(D.diag, model.weights()),
                          D.dense(), fp};
}

Trajectory simulate_linear(const LinearizedSystem& sys, const Eigen::VectorXd& dev_init, const InputSequence& inputs,
                           std::size_t horizon) {
  const auto n = sys.A.rows();
  require_length(dev_init, n, "dev_init");
  inputs.validate(n);
  check_state(dev_init, 0);

  Trajectory out{sys.variant == LinearizationVariant::ActivationSpace ? StateKind::Activation : StateKind::Activity,
                 {}};
  out.states.reserve(horizon + 1);
  Eigen::VectorXd s = dev_init;
  out.states.push_back(s);
  for (std::size_t k = 0; k < horizon; ++k) {
    if (k < inputs.stored_steps()) {
      s = sys.A * s + sys.B * inputs.steps()[k];
    } else {
      s = sys.A * s;
    }
    check_state(s, k + 1);
    out.states.push_back(s);
  }
  return out;
}

Trajectory map_x_to_r(const GainMatrix& D, const Trajectory& x_traj) {
  Trajectory out{StateKind::Activity, {}};
  out.states.reserve(x_traj.states.size());
  for (const auto& x : x_traj.states) {
    require_length(x, D.size(), "trajectory state");
    out.states.push_back(D.diag.cwiseProduct(x));
  }
  return out;
}

Trajectory map_r_to_x(const GainMatrix& D, const Trajectory& r_traj) {
  D.require_invertible();
  Trajectory out{StateKind::Activation, {}};
  out.states.reserve(r_traj.states.size());
  for (const auto& r : r_traj.states) {
    require_length(r, D.size(), "trajectory state");
    out.states.push_back(r.cwiseQuotient(D.diag));
  }
  return out;
}

EquivalenceReport check_equivalence(const RnnModel& model, const FixedPoint& fp, const Eigen::VectorXd& dev_init,
                                    const InputSequence& inputs, std::size_t horizon, double tol) {
  const GainMatrix D = gain_matrix(model, fp);
  const Trajectory xs = simulate_linear(linearize_activation(model, fp), dev_init, inputs, horizon);
  const Trajectory rs =
      simulate_linear(linearize_activity(model, fp), D.diag.cwiseProduct(dev_init), inputs, horizon);

  EquivalenceReport rep;
  rep.tol = tol;
  rep.step_gap.reserve(horizon + 1);
  for (std::size_t k = 0; k <= horizon; ++k) {
    const double gap = (D.diag.cwiseProduct(xs.states[k]) - rs.states[k]).lpNorm<Eigen::Infinity>();
    rep.step_gap.push_back(gap);
    rep.max_gap = std::max(rep.max_gap, gap);
    rep.max_activity_norm = std::max(rep.max_activity_norm, rs.states[k].lpNorm<Eigen::Infinity>());
  }
  rep.threshold = tol * (1.0 + rep.max_activity_norm);
  rep.passed = rep.max_gap <= rep.threshold;
  return rep;
}

double linearization_error(const RnnModel& model, const FixedPoint& fp, const Eigen::VectorXd& direction,
                           double epsilon, std::size_t horizon) {
  const auto n = model.size();
  require_length(direction, n, "direction");
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) {
    throw DomainError(fmt::format("epsilon must be finite and non-negative, got {}", epsilon));
  }
  if (std::abs(direction.norm() - 1.0) > 1e-12) {
    throw DomainError(fmt::format("direction must have unit 2-norm, got {}", direction.norm()));
  }
  const Eigen::VectorXd kick = epsilon * direction;
  const InputSequence none;
  const auto nonlinear = simulate(model, fp.x0() + kick, none, fp.context(), horizon);
  // x0 is only a fixed point to within its residual; subtracting the trajectory
  // started at x0 cancels that drift.
  const auto resting = simulate(model, fp.x0(), none, fp.context(), horizon);
  const Trajectory linear = simulate_linear(linearize_activation(model, fp), kick, none, horizon);

  double worst = 0.0;
  for (std::size_t k = 0; k <= horizon; ++k) {
    const Eigen::VectorXd deviation = nonlinear.activation.states[k] - resting.activation.states[k];
    worst = std::max(worst, (deviation - linear.states[k]).lpNorm<Eigen::Infinity>());
  }
  return worst;
}

Eigen::MatrixXd activation_jacobian_fd(const RnnModel& model, const FixedPoint& fp, double h) {
  const Eigen::VectorXd c = fp.context();
  const kernels::VectorMap f = [&model, c](const Eigen::VectorXd& x) -> Eigen::VectorXd {
    return model.weights() * model.nonlinearity().apply(x) + c;
  };
  return kernels::central_difference_jacobian(f, fp.x0(), h);
}

Eigen::MatrixXd activity_jacobian_fd(const RnnModel& model, const FixedPoint& fp, double h) {
  const Eigen::VectorXd c = fp.context();
  const kernels::VectorMap f = [&model, c](const Eigen::VectorXd& r) -> Eigen::VectorXd {
    return model.nonlinearity().apply(model.weights() * r + c);
  };
  return kernels::central_difference_jacobian(f, fp.r0(), h);
}

}  // namespace rnnlinz
