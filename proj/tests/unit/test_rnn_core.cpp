#include <doctest.h>

#include <cmath>
#include <random>

#include "rnnlinz/errors.hpp"
#include "rnnlinz/fixed_point.hpp"
#include "rnnlinz/rnn_core.hpp"
#include "support.hpp"

using namespace rnnlinz;
using namespace rnnlinz::testing;

TEST_CASE("step examples") {
  const Nonlinearity tanh_nl(NonlinearityKind::Tanh);
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(2);

  const RnnModel silent(Eigen::MatrixXd::Zero(2, 2), tanh_nl);
  CHECK(step(silent, vec2(3.0, -4.0), vec2(1, 2), zero) == Eigen::VectorXd(vec2(1, 2)));

  const RnnModel swap = swap_model();
  CHECK(step(swap, zero, zero, zero) == zero);

  // 0.5 * tanh(1) by hand.
  const Eigen::VectorXd y = step(swap, vec2(1.0, 0.0), zero, zero);
  CHECK(y[0] == 0.0);
  CHECK(y[1] == doctest::Approx(0.380797077977882444).epsilon(1e-15));

  CHECK(step(swap, vec2(0.2, 0.0), zero, vec2(0.1, -0.1)) ==
        Eigen::VectorXd(swap.weights() * vec2(std::tanh(0.2), 0.0) + vec2(0.1, -0.1)));
}

TEST_CASE("model and shape validation") {
  const Nonlinearity tanh_nl(NonlinearityKind::Tanh);
  CHECK_THROWS_AS(RnnModel(Eigen::MatrixXd::Zero(2, 3), tanh_nl), ShapeError);
  CHECK_THROWS_AS(RnnModel(Eigen::MatrixXd::Zero(0, 0), tanh_nl), ShapeError);
  Eigen::MatrixXd bad = Eigen::MatrixXd::Zero(2, 2);
  bad(0, 1) = NAN;
  CHECK_THROWS_AS(RnnModel(bad, tanh_nl), DomainError);

  const RnnModel swap = swap_model();
  CHECK_THROWS_AS(step(swap, Eigen::VectorXd::Zero(3), Eigen::VectorXd::Zero(2), Eigen::VectorXd::Zero(2)),
                  ShapeError);
  CHECK_THROWS_AS(simulate(swap, Eigen::VectorXd::Zero(2), InputSequence({Eigen::VectorXd::Zero(3)}),
                           Eigen::VectorXd::Zero(2), 3),
                  ShapeError);
}

TEST_CASE("simulate examples") {
  const RnnModel swap = swap_model();
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(2);

  SUBCASE("horizon 0") {
    const auto sim = simulate(swap, vec2(0.3, -0.2), {}, zero, 0);
    REQUIRE(sim.activation.states.size() == 1);
    CHECK(sim.activation.states[0] == Eigen::VectorXd(vec2(0.3, -0.2)));
    CHECK(sim.activity.states[0] == Eigen::VectorXd(vec2(std::tanh(0.3), std::tanh(-0.2))));
    CHECK(sim.activation.kind == StateKind::Activation);
    CHECK(sim.activity.kind == StateKind::Activity);
  }
  SUBCASE("origin stays put") {
    std::mt19937_64 rng(3);
    const RnnModel m(random_matrix(rng, 6, 1.5), Nonlinearity(NonlinearityKind::Tanh));
    const auto sim = simulate(m, Eigen::VectorXd::Zero(6), {}, Eigen::VectorXd::Zero(6), 20);
    for (const auto& s : sim.activation.states) CHECK(s.isZero(0.0));
    for (const auto& s : sim.activity.states) CHECK(s.isZero(0.0));
  }
  SUBCASE("decay toward the origin") {
    // Origin Jacobian W has spectral radius 0.5, so 50 steps shrink 0.1 below 1e-8.
    const auto sim = simulate(swap, vec2(0.1, 0.0), {}, zero, 50);
    CHECK(sim.activation.states.size() == 51);
    CHECK(sim.activation.states.back().norm() < 1e-8);
  }
}

TEST_CASE("activity form reproduces the activity trajectory") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const Eigen::Index n = 2 + trial;
    const RnnModel m(random_matrix(rng, n, 1.4), Nonlinearity(NonlinearityKind::Tanh));
    const Eigen::VectorXd c = random_vector(rng, n, 0.3);
    std::vector<Eigen::VectorXd> us;
    for (int k = 0; k < 60; ++k) us.push_back(random_vector(rng, n, 0.1));
    const InputSequence inputs(us);
    const Eigen::VectorXd x_init = random_vector(rng, n, 0.5);

    const auto sim = simulate(m, x_init, inputs, c, 100);
    for (std::size_t k = 0; k < sim.activation.states.size(); ++k) {
      CHECK(m.nonlinearity().apply(sim.activation.states[k]) == sim.activity.states[k]);
    }
    const Trajectory rates = simulate_activity(m, m.nonlinearity().apply(x_init), inputs, c, 100);
    for (std::size_t k = 0; k < rates.states.size(); ++k) {
      CHECK((rates.states[k] - sim.activity.states[k]).lpNorm<Eigen::Infinity>() <= 1e-12);
    }
  }
}

TEST_CASE("shift property: a settled network waits for its first input") {
  const RnnModel swap = swap_model();
  const Eigen::VectorXd c = vec2(0.1, 0.0);
  const FixedPoint fp = find_fixed_point(swap, c, Eigen::VectorXd::Zero(2));
  std::vector<Eigen::VectorXd> us(10, Eigen::VectorXd::Zero(2));
  us.push_back(vec2(0.2, 0.0));
  const auto sim = simulate(swap, fp.x0(), InputSequence(us), c, 14);
  for (std::size_t k = 0; k <= 10; ++k) {
    CHECK((sim.activation.states[k] - fp.x0()).lpNorm<Eigen::Infinity>() <= 1e-15);
  }
  CHECK((sim.activation.states[11] - fp.x0()).lpNorm<Eigen::Infinity>() > 0.1);
}

TEST_CASE("divergence is reported with the step index") {
  const RnnModel big(Eigen::MatrixXd::Identity(2, 2), Nonlinearity(NonlinearityKind::Identity, 10.0));
  try {
    simulate(big, vec2(1.0, 0.0), {}, Eigen::VectorXd::Zero(2), 50);
    FAIL("expected divergence");
  } catch (const DivergenceError& e) {
    CHECK(e.step() == 13);  // 10^13 is the first power above 1e12
  }
  const RnnModel swap = swap_model();
  CHECK_THROWS_AS(simulate(swap, vec2(1.0, 0.0), InputSequence({vec2(INFINITY, 0.0)}), vec2(0, 0), 2),
                  DomainError);
}

TEST_CASE("input sequence pads with zeros") {
  const InputSequence seq({vec2(1, 2)});
  CHECK(seq.at(0, 2) == Eigen::VectorXd(vec2(1, 2)));
  CHECK(seq.at(5, 2).isZero(0.0));
  CHECK(InputSequence{}.at(0, 3).size() == 3);
}
