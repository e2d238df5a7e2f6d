#pragma once

#include <filesystem>
#include <random>
#include <utility>

#include <Eigen/Core>

#include "rnnlinz/fixed_point.hpp"
#include "rnnlinz/rnn_core.hpp"

namespace rnnlinz::testing {

inline std::filesystem::path fixture_dir() { return RNNLINZ_FIXTURE_DIR; }

inline Eigen::MatrixXd random_matrix(std::mt19937_64& rng, Eigen::Index n, double scale) {
  std::normal_distribution<double> normal(0.0, scale / std::sqrt(static_cast<double>(n)));
  Eigen::MatrixXd W(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) W(i, j) = normal(rng);
  return W;
}

inline Eigen::VectorXd random_vector(std::mt19937_64& rng, Eigen::Index n, double scale) {
  std::normal_distribution<double> normal(0.0, scale);
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = normal(rng);
  return v;
}

// Context whose fixed point is a random x0 of the given spread: c = x0 - W g(x0).
// Returns {c, x0}; Newton from a nearby guess then recovers x0 without
// depending on global convergence from zero.
inline std::pair<Eigen::VectorXd, Eigen::VectorXd> planted_context(const RnnModel& m, std::mt19937_64& rng,
                                                                   double spread) {
  const Eigen::VectorXd x0 = random_vector(rng, m.size(), spread);
  return {x0 - m.weights() * m.nonlinearity().apply(x0), x0};
}

inline FixedPoint planted_fixed_point(const RnnModel& m, std::mt19937_64& rng, double spread) {
  const auto [c, x0] = planted_context(m, rng, spread);
  return find_fixed_point(m, c, x0 + random_vector(rng, m.size(), 1e-2));
}

inline Eigen::Vector2d vec2(double a, double b) { return Eigen::Vector2d(a, b); }

inline Eigen::MatrixXd mat2(double a, double b, double c, double d) {
  Eigen::MatrixXd m(2, 2);
  m << a, b, c, d;
  return m;
}

// W = [[0, 0.5], [0.5, 0]] with tanh; used throughout as the hand-checkable case.
inline RnnModel swap_model() { return RnnModel(mat2(0.0, 0.5, 0.5, 0.0), Nonlinearity(NonlinearityKind::Tanh)); }

}  // namespace rnnlinz::testing
