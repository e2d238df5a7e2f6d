#include "rnnlinz/rnn_core.hpp"

#include <cmath>

#include <fmt/format.h>

#include "rnnlinz/errors.hpp"

namespace rnnlinz {

RnnModel::RnnModel(Eigen::MatrixXd weights, Nonlinearity nl) : weights_(std::move(weights)), nl_(nl) {
  if (weights_.rows() == 0 || weights_.rows() != weights_.cols()) {
    throw ShapeError(fmt::format("weight matrix must be square and non-empty, got {}x{}", weights_.rows(),
                                 weights_.cols()));
  }
  if (!weights_.allFinite()) {
    throw DomainError("weight matrix has non-finite entries");
  }
}

Eigen::VectorXd InputSequence::at(std::size_t k, Eigen::Index n) const {
  if (k < steps_.size()) {
    return steps_[k];
  }
  return Eigen::VectorXd::Zero(n);
}

void InputSequence::validate(Eigen::Index n) const {
  for (std::size_t k = 0; k < steps_.size(); ++k) {
    if (steps_[k].size() != n) {
      throw ShapeError(fmt::format("input u^{} has length {}, expected {}", k, steps_[k].size(), n));
    }
    if (!steps_[k].allFinite()) {
      throw DomainError(fmt::format("input u^{} has non-finite entries", k));
    }
  }
}

void require_length(const Eigen::VectorXd& v, Eigen::Index n, const char* what) {
  if (v.size() != n) {
    throw ShapeError(fmt::format("{} has length {}, expected {}", what, v.size(), n));
  }
}

void check_state(const Eigen::VectorXd& state, std::size_t k) {
  if (!state.allFinite()) {
    throw DivergenceError(k, fmt::format("state became non-finite at step {}", k));
  }
  const double norm = state.lpNorm<Eigen::Infinity>();
  if (norm > kDivergenceNorm) {
    throw DivergenceError(k, fmt::format("state norm {:.3e} exceeds {:.0e} at step {}", norm, kDivergenceNorm, k));
  }
}

Eigen::VectorXd step(const RnnModel& model, const Eigen::VectorXd& x, const Eigen::VectorXd& u,
                     const Eigen::VectorXd& c) {
  const auto n = model.size();
  require_length(x, n, "activation x");
  require_length(u, n, "input u");
  require_length(c, n, "context c");
  return model.weights() * model.nonlinearity().apply(x) + u + c;
}

Eigen::VectorXd step_activity(const RnnModel& model, const Eigen::VectorXd& r, const Eigen::VectorXd& u,
                              const Eigen::VectorXd& c) {
  const auto n = model.size();
  require_length(r, n, "activity r");
  require_length(u, n, "input u");
  require_length(c, n, "context c");
  return model.nonlinearity().apply(model.weights() * r + u + c);
}

SimulationResult simulate(const RnnModel& model, const Eigen::VectorXd& x_init, const InputSequence& inputs,
                          const Eigen::VectorXd& c, std::size_t horizon) {
  const auto n = model.size();
  require_length(x_init, n, "x_init");
  require_length(c, n, "context c");
  inputs.validate(n);
  check_state(x_init, 0);

  SimulationResult out;
  out.activation.kind = StateKind::Activation;
  out.activity.kind = StateKind::Activity;
  out.activation.states.reserve(horizon + 1);
  out.activity.states.reserve(horizon + 1);

  const auto& nl = model.nonlinearity();
  Eigen::VectorXd x = x_init;
  Eigen::VectorXd r = nl.apply(x);
  out.activation.states.push_back(x);
  out.activity.states.push_back(r);
  for (std::size_t k = 0; k < horizon; ++k) {
    x = model.weights() * r + inputs.at(k, n) + c;
    check_state(x, k + 1);
    r = nl.apply(x);
    out.activation.states.push_back(x);
    out.activity.states.push_back(r);
  }
  return out;
}

Trajectory simulate_activity(const RnnModel& model, const Eigen::VectorXd& r_init, const InputSequence& inputs,
                             const Eigen::VectorXd& c, std::size_t horizon) {
  const auto n = model.size();
  require_length(r_init, n, "r_init");
  require_length(c, n, "context c");
  inputs.validate(n);
  check_state(r_init, 0);

  Trajectory out{StateKind::Activity, {}};
  out.states.reserve(horizon + 1);
  Eigen::VectorXd r = r_init;
  out.states.push_back(r);
  for (std::size_t k = 0; k < horizon; ++k) {
    Eigen::VectorXd pre = model.weights() * r + inputs.at(k, n) + c;
    check_state(pre, k + 1);
    r = model.nonlinearity().apply(pre);
    out.states.push_back(r);
  }
  return out;
}

}  // namespace rnnlinz
