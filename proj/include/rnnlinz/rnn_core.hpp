#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Core>

#include "rnnlinz/nonlinearity.hpp"

namespace rnnlinz {

/// Discrete-time RNN  x^{k+1} = W g(x^k) + u^k + c,  r^k = g(x^k).
class RnnModel {
 public:
  RnnModel(Eigen::MatrixXd weights, Nonlinearity nl);

  Eigen::Index size() const noexcept { return weights_.rows(); }
  const Eigen::MatrixXd& weights() const noexcept { return weights_; }
  const Nonlinearity& nonlinearity() const noexcept { return nl_; }

  friend bool operator==(const RnnModel& a, const RnnModel& b) {
    return a.nl_ == b.nl_ && a.weights_.rows() == b.weights_.rows() &&
           a.weights_.cols() == b.weights_.cols() && a.weights_ == b.weights_;
  }

 private:
  Eigen::MatrixXd weights_;
  Nonlinearity nl_;
};

/// Inputs u^k for k = 0, 1, ...; anything not stored (including every k < 0)
/// is the zero vector.
class InputSequence {
 public:
  InputSequence() = default;
  explicit InputSequence(std::vector<Eigen::VectorXd> steps) : steps_(std::move(steps)) {}

  std::size_t stored_steps() const noexcept { return steps_.size(); }
  const std::vector<Eigen::VectorXd>& steps() const noexcept { return steps_; }

  /// u^k, or zeros(n) past the stored tail.
  Eigen::VectorXd at(std::size_t k, Eigen::Index n) const;

  // Throws ShapeError/DomainError if any stored vector has the wrong length or a non-finite entry.
  void validate(Eigen::Index n) const;

 private:
  std::vector<Eigen::VectorXd> steps_;
};

enum class StateKind { Activation, Activity };

struct Trajectory {
  StateKind kind = StateKind::Activation;
  std::vector<Eigen::VectorXd> states;  // states[k] for k = 0..horizon

  std::size_t horizon() const noexcept { return states.empty() ? 0 : states.size() - 1; }
};

struct SimulationResult {
  Trajectory activation;
  Trajectory activity;
};

// States with a non-finite entry or an infinity norm above this abort a run.
inline constexpr double kDivergenceNorm = 1e12;

/// One step of the activation form:  W g(x) + u + c.
Eigen::VectorXd step(const RnnModel& model, const Eigen::VectorXd& x, const Eigen::VectorXd& u,
                     const Eigen::VectorXd& c);

/// One step of the activity form:  g(W r + u + c).
Eigen::VectorXd step_activity(const RnnModel& model, const Eigen::VectorXd& r, const Eigen::VectorXd& u,
                              const Eigen::VectorXd& c);

/// Runs the activation recursion from x_init and returns it together with the
/// activity trajectory r^k = g(x^k) of the same run.
SimulationResult simulate(const RnnModel& model, const Eigen::VectorXd& x_init, const InputSequence& inputs,
                          const Eigen::VectorXd& c, std::size_t horizon);

/// Runs the activity recursion r^{k+1} = g(W r^k + u^k + c) directly, without
/// passing through activations. Used to cross-check simulate().
Trajectory simulate_activity(const RnnModel& model, const Eigen::VectorXd& r_init, const InputSequence& inputs,
                             const Eigen::VectorXd& c, std::size_t horizon);

// Shared by the nonlinear and linear simulators.
void check_state(const Eigen::VectorXd& state, std::size_t k);
void require_length(const Eigen::VectorXd& v, Eigen::Index n, const char* what);

}  // namespace rnnlinz
