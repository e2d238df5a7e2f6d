#include <doctest.h>

#include <Eigen/LU>

#include <cmath>
#include <random>

#include "rnnlinz/context.hpp"
#include "rnnlinz/errors.hpp"
#include "support.hpp"

using namespace rnnlinz;
using namespace rnnlinz::testing;

namespace {

const Eigen::VectorXd kZero2 = Eigen::VectorXd::Zero(2);

RnnModel identity_model() {
  return RnnModel(mat2(0.2, -0.1, 0.3, 0.1), Nonlinearity(NonlinearityKind::Identity));
}

// Independent oracle: plain iteration to the fixed point and sech^2 gains.
Eigen::VectorXd iterate_gains(const Eigen::MatrixXd& W, const Eigen::VectorXd& c) {
  Eigen::VectorXd x = Eigen::VectorXd::Zero(c.size());
  for (int i = 0; i < 10000; ++i) {
    const Eigen::VectorXd next = W * x.array().tanh().matrix() + c;
    const double change = (next - x).lpNorm<Eigen::Infinity>();
    x = next;
    if (change < 1e-15) break;
  }
  return (1.0 / x.array().cosh().square()).matrix();
}

double naive_angle_deg(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return std::acos(std::clamp(a.dot(b) / (a.norm() * b.norm()), -1.0, 1.0)) * 180.0 / M_PI;
}

}  // namespace

TEST_CASE("instantiate_context examples") {
  const RnnModel swap = swap_model();
  SUBCASE("zero context sits at the origin") {
    const auto inst = instantiate_context(swap, Context{"zero", kZero2}, kZero2);
    CHECK(inst.fp.x0().isZero(0.0));
    CHECK(inst.D.diag == Eigen::VectorXd::Ones(2));
    CHECK(inst.activation_sys.A == swap.weights());
    CHECK(inst.activity_sys.A == swap.weights());
  }
  SUBCASE("identity nonlinearity") {
    const RnnModel lin = identity_model();
    const auto inst = instantiate_context(lin, Context{"c", vec2(1.0, -0.5)}, kZero2);
    const Eigen::VectorXd expected = (Eigen::MatrixXd::Identity(2, 2) - lin.weights()).lu().solve(vec2(1.0, -0.5));
    CHECK((inst.fp.x0() - expected).lpNorm<Eigen::Infinity>() <= 1e-14);
    CHECK(inst.D.diag == Eigen::VectorXd::Ones(2));
    CHECK(inst.activation_sys.A == lin.weights());
    CHECK(inst.activity_sys.A == lin.weights());
  }
  SUBCASE("2x2 reference context") {
    const auto inst = instantiate_context(swap, Context{"R", vec2(0.1, 0.0)}, kZero2);
    const Eigen::VectorXd gains = iterate_gains(swap.weights(), vec2(0.1, 0.0));
    CHECK((inst.D.diag - gains).lpNorm<Eigen::Infinity>() <= 1e-12);
    CHECK(inst.activation_sys.A == Eigen::MatrixXd(swap.weights() * inst.D.diag.asDiagonal()));
    CHECK(inst.activity_sys.A == Eigen::MatrixXd(inst.D.diag.asDiagonal() * swap.weights()));
    CHECK(inst.activation_sys.B == Eigen::MatrixXd::Identity(2, 2));
    CHECK(inst.activity_sys.B == inst.D.dense());
  }
}

TEST_CASE("compare_contexts examples") {
  const RnnModel swap = swap_model();
  const Eigen::VectorXd u = vec2(1.0, 1.0);

  SUBCASE("same context twice") {
    const Context a{"A", vec2(0.4, -0.2)};
    const auto cmp = compare_contexts(swap, a, a, u);
    CHECK(cmp.effective_input_angle_deg == 0.0);
    CHECK(cmp.effective_input_norm_ratio == 1.0);
    CHECK(cmp.max_spectrum_gap == 0.0);
    CHECK(cmp.activation_input_identical);
  }
  SUBCASE("identity control: no input modulation") {
    const auto cmp = compare_contexts(identity_model(), {"A", vec2(1.0, -0.5)}, {"B", vec2(-2.0, 0.7)}, u);
    CHECK(cmp.effective_input_angle_deg <= 1e-12);
    CHECK(std::abs(cmp.effective_input_norm_ratio - 1.0) <= 1e-12);
    CHECK(cmp.activation_input_identical);
  }
  SUBCASE("saturating contexts on opposite units") {
    const Context a{"A", vec2(1.5, 0.0)};
    const Context b{"B", vec2(0.0, 1.5)};
    const auto cmp = compare_contexts(swap, a, b, u);
    const Eigen::VectorXd ga = iterate_gains(swap.weights(), a.c);
    const Eigen::VectorXd gb = iterate_gains(swap.weights(), b.c);
    // Oracle angle between D_A u and D_B u is about 73.02 degrees.
    CHECK(cmp.effective_input_angle_deg == doctest::Approx(naive_angle_deg(ga, gb)).epsilon(1e-9));
    CHECK(cmp.effective_input_angle_deg > 1.0);
    // W is symmetric under swapping the units and so are the two contexts, so
    // D_B is D_A with its entries swapped and the norms agree exactly.
    CHECK(cmp.effective_input_norm_ratio == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(cmp.activation_input_identical);
  }
  SUBCASE("saturating versus mild context") {
    const Context a{"A", vec2(1.5, 0.0)};
    const Context b{"B", vec2(0.0, 0.3)};
    const auto cmp = compare_contexts(swap, a, b, u);
    const Eigen::VectorXd ga = iterate_gains(swap.weights(), a.c);
    const Eigen::VectorXd gb = iterate_gains(swap.weights(), b.c);
    CHECK(cmp.effective_input_angle_deg == doctest::Approx(naive_angle_deg(ga, gb)).epsilon(1e-9));
    CHECK(cmp.effective_input_norm_ratio == doctest::Approx(ga.norm() / gb.norm()).epsilon(1e-12));
    CHECK(cmp.effective_input_angle_deg > 1.0);
    CHECK((cmp.effective_input_norm_ratio < 0.99 || cmp.effective_input_norm_ratio > 1.01));
  }
  CHECK_THROWS_AS(compare_contexts(swap, {"A", kZero2}, {"B", kZero2}, kZero2), ZeroProbe);
}

TEST_CASE("effective inputs scale linearly and the angle ignores probe scale") {
  std::mt19937_64 rng(103);
  const RnnModel m(random_matrix(rng, 6, 1.1), Nonlinearity(NonlinearityKind::Tanh));
  const Context a{"A", random_vector(rng, 6, 0.8)};
  const Context b{"B", random_vector(rng, 6, 0.8)};
  const Eigen::VectorXd u = random_vector(rng, 6, 1.0);
  const auto base = compare_contexts(m, a, b, u);
  for (double alpha : {0.5, 3.0, 1e3}) {
    const auto scaled = compare_contexts(m, a, b, alpha * u);
    CHECK((scaled.effective_input_a - alpha * base.effective_input_a).lpNorm<Eigen::Infinity>() <=
          1e-14 * alpha * base.effective_input_a.lpNorm<Eigen::Infinity>());
    CHECK(scaled.effective_input_angle_deg == doctest::Approx(base.effective_input_angle_deg).epsilon(1e-10));
  }
}

TEST_CASE("angle is stable near 0 and 180 degrees") {
  const Eigen::Vector2d a(1.0, 0.0);
  CHECK(angle_degrees(a, Eigen::Vector2d(1.0, 1e-10)) == doctest::Approx(1e-10 * 180.0 / M_PI).epsilon(1e-6));
  CHECK(angle_degrees(a, Eigen::Vector2d(-1.0, 1e-10)) ==
        doctest::Approx(180.0 - 1e-10 * 180.0 / M_PI).epsilon(1e-14));
  CHECK(angle_degrees(a, a) == 0.0);
  CHECK_THROWS_AS(angle_degrees(a, Eigen::Vector2d::Zero()), DomainError);
}

TEST_CASE("activation input matrix is exactly I, activity input matrix is D_R") {
  std::mt19937_64 rng(107);
  for (int trial = 0; trial < 10; ++trial) {
    const Eigen::Index n = 2 + trial;
    const RnnModel m(random_matrix(rng, n, 1.2), Nonlinearity(NonlinearityKind::Tanh));
    const auto [c, x0] = planted_context(m, rng, 1.0);
    const auto inst = instantiate_context(m, Context{"R", c}, x0);
    CHECK(inst.activation_sys.B == Eigen::MatrixXd::Identity(n, n));
    CHECK(inst.activity_sys.B == inst.D.dense());
  }
}

TEST_CASE("each instantiation passes the equivalence check around its own fixed point") {
  std::mt19937_64 rng(109);
  for (int trial = 0; trial < 6; ++trial) {
    const Eigen::Index n = 3 + trial;
    const RnnModel m(random_matrix(rng, n, 1.0), Nonlinearity(NonlinearityKind::Tanh));
    const auto [c, x0] = planted_context(m, rng, 1.0);
    const auto inst = instantiate_context(m, Context{"R", c}, x0);
    std::vector<Eigen::VectorXd> us;
    for (int k = 0; k < 50; ++k) us.push_back(random_vector(rng, n, 1e-4));
    const auto rep = check_equivalence(m, inst.fp, random_vector(rng, n, 1e-3), InputSequence(us), 100, 1e-12);
    CHECK(rep.passed);
  }
}

TEST_CASE("fixed points and gains move continuously with the context") {
  std::mt19937_64 rng(113);
  for (int trial = 0; trial < 6; ++trial) {
    const Eigen::Index n = 4 + trial;
    const RnnModel m(random_matrix(rng, n, 1.0), Nonlinearity(NonlinearityKind::Tanh));
    const auto [c, x0] = planted_context(m, rng, 1.0);
    Eigen::VectorXd delta = random_vector(rng, n, 1.0);
    delta *= 1e-6 / delta.norm();
    const auto base = instantiate_context(m, Context{"c", c}, x0);
    const auto moved = instantiate_context(m, Context{"c+d", c + delta}, base.fp.x0());
    // First-order sensitivity dx0 = (I - W D)^-1 dc.
    const Eigen::MatrixXd J = Eigen::MatrixXd::Identity(n, n) - base.activation_sys.A;
    const Eigen::VectorXd predicted = J.lu().solve(delta);
    const double dx = (moved.fp.x0() - base.fp.x0()).norm();
    CHECK(dx <= 10.0 * predicted.norm());
    // |d/dx sech^2| <= 0.77, so the gains move at most that much faster.
    CHECK((moved.D.diag - base.D.diag).norm() <= 10.0 * 0.77 * predicted.norm() + 1e-15);
  }
}

TEST_CASE("context sweep") {
  const RnnModel swap = swap_model();
  const Eigen::VectorXd u = vec2(1.0, 1.0);

  SUBCASE("single context") {
    const auto sweep = context_sweep(swap, {{"only", vec2(0.1, 0.0)}}, u);
    CHECK(sweep.entries.size() == 1);
    CHECK(sweep.comparisons.empty());
  }
  SUBCASE("identical contexts") {
    const auto sweep = context_sweep(swap, {{"a", vec2(0.3, 0.1)}, {"b", vec2(0.3, 0.1)}}, u);
    REQUIRE(sweep.comparisons.size() == 1);
    CHECK(sweep.comparisons[0].effective_input_angle_deg == 0.0);
    CHECK(sweep.comparisons[0].effective_input_norm_ratio == 1.0);
    CHECK(sweep.comparisons[0].max_spectrum_gap == 0.0);
  }
  SUBCASE("three contexts agree with independent instantiate/compare") {
    const std::vector<Context> ctxs{{"a", vec2(1.5, 0.0)}, {"b", vec2(0.0, 0.3)}, {"c", vec2(-0.7, 0.9)}};
    const auto sweep = context_sweep(swap, ctxs, u);
    REQUIRE(sweep.entries.size() == 3);
    REQUIRE(sweep.comparisons.size() == 3);
    const std::vector<std::pair<std::size_t, std::size_t>> order{{0, 1}, {0, 2}, {1, 2}};
    for (std::size_t k = 0; k < 3; ++k) {
      const auto [i, j] = order[k];
      const auto direct = compare_contexts(swap, ctxs[i], ctxs[j], u);
      CHECK(sweep.comparisons[k].label_a == ctxs[i].label);
      CHECK(sweep.comparisons[k].label_b == ctxs[j].label);
      CHECK(sweep.comparisons[k].effective_input_angle_deg ==
            doctest::Approx(direct.effective_input_angle_deg).epsilon(1e-12));
      CHECK(sweep.comparisons[k].effective_input_norm_ratio ==
            doctest::Approx(direct.effective_input_norm_ratio).epsilon(1e-12));
    }
  }
  SUBCASE("failures are recorded in place") {
    const RnnModel flat(Eigen::MatrixXd::Identity(2, 2), Nonlinearity(NonlinearityKind::Identity));
    const auto sweep = context_sweep(flat, {{"bad", vec2(1.0, 0.0)}, {"ok", kZero2}}, u);
    CHECK(sweep.failures == 1);
    CHECK_FALSE(sweep.entries[0].ok());
    CHECK_FALSE(sweep.entries[0].error.empty());
    CHECK(sweep.entries[1].ok());
    CHECK(sweep.comparisons.empty());
  }
  CHECK_THROWS_AS(context_sweep(swap, {}, u), ShapeError);
}

TEST_CASE("parallel sweep matches the serial reference exactly") {
  std::mt19937_64 rng(127);
  const Eigen::Index n = 12;
  const RnnModel m(random_matrix(rng, n, 1.2), Nonlinearity(NonlinearityKind::Tanh));
  std::vector<Context> ctxs;
  for (int i = 0; i < 9; ++i) ctxs.push_back({"c" + std::to_string(i), random_vector(rng, n, 0.6)});
  const Eigen::VectorXd u = random_vector(rng, n, 1.0);
  for (bool warm : {true, false}) {
    SweepOptions opts;
    opts.warm_start = warm;
    const auto par = context_sweep(m, ctxs, u, opts);
    const auto ser = context_sweep_serial(m, ctxs, u, opts);
    REQUIRE(par.comparisons.size() == ser.comparisons.size());
    CHECK(par.failures == ser.failures);
    for (std::size_t k = 0; k < par.entries.size(); ++k) {
      CHECK(par.entries[k].activation_spectrum == ser.entries[k].activation_spectrum);
    }
    for (std::size_t k = 0; k < par.comparisons.size(); ++k) {
      CHECK(par.comparisons[k].index_a == ser.comparisons[k].index_a);
      CHECK(par.comparisons[k].effective_input_angle_deg == ser.comparisons[k].effective_input_angle_deg);
      CHECK(par.comparisons[k].max_spectrum_gap == ser.comparisons[k].max_spectrum_gap);
    }
  }
}
