// Serial reference vs OpenMP kernels. Run with --benchmark_filter=... to pick
// one family; OMP_NUM_THREADS controls the parallel side.

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include <benchmark/benchmark.h>

#include "rnnlinz/context.hpp"
#include "rnnlinz/kernels.hpp"

using namespace rnnlinz;

namespace {

Eigen::MatrixXd random_matrix(Eigen::Index n, double scale, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, scale / std::sqrt(static_cast<double>(n)));
  Eigen::MatrixXd W(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) W(i, j) = normal(rng);
  return W;
}

Eigen::VectorXd random_vector(Eigen::Index n, double scale, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, scale);
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = normal(rng);
  return v;
}

template <bool Parallel>
void BM_ScaleColumns(benchmark::State& state) {
  const Eigen::Index n = state.range(0);
  const Eigen::MatrixXd W = random_matrix(n, 1.0, 1);
  const Eigen::VectorXd d = random_vector(n, 1.0, 2);
  for (auto _ : state) {
    Eigen::MatrixXd out = Parallel ? kernels::scale_columns(W, d) : kernels::serial::scale_columns(W, d);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * n * n);
}

template <bool Parallel>
void BM_FdJacobian(benchmark::State& state) {
  const Eigen::Index n = state.range(0);
  const Eigen::MatrixXd W = random_matrix(n, 1.0, 3);
  const Eigen::VectorXd c = random_vector(n, 0.5, 4);
  const kernels::VectorMap f = [&](const Eigen::VectorXd& x) -> Eigen::VectorXd {
    return W * x.array().tanh().matrix() + c;
  };
  const Eigen::VectorXd x = random_vector(n, 0.5, 5);
  for (auto _ : state) {
    Eigen::MatrixXd J = Parallel ? kernels::central_difference_jacobian(f, x, 1e-5)
                                 : kernels::serial::central_difference_jacobian(f, x, 1e-5);
    benchmark::DoNotOptimize(J.data());
  }
}

template <bool Parallel>
void BM_ContextSweep(benchmark::State& state) {
  const Eigen::Index n = state.range(0);
  const RnnModel model(random_matrix(n, 0.9, 6), Nonlinearity(NonlinearityKind::Tanh));
  std::vector<Context> contexts;
  for (unsigned i = 0; i < 8; ++i) contexts.push_back({"c" + std::to_string(i), random_vector(n, 0.3, 10 + i)});
  const Eigen::VectorXd u = Eigen::VectorXd::Ones(n);
  for (auto _ : state) {
    auto sweep = Parallel ? context_sweep(model, contexts, u) : context_sweep_serial(model, contexts, u);
    benchmark::DoNotOptimize(sweep.comparisons.data());
  }
}

}  // namespace

BENCHMARK(BM_ScaleColumns<false>)->Name("scale_columns/serial")->RangeMultiplier(4)->Range(16, 1024);
BENCHMARK(BM_ScaleColumns<true>)->Name("scale_columns/omp")->RangeMultiplier(4)->Range(16, 1024);
BENCHMARK(BM_FdJacobian<false>)->Name("fd_jacobian/serial")->RangeMultiplier(2)->Range(8, 128);
BENCHMARK(BM_FdJacobian<true>)->Name("fd_jacobian/omp")->RangeMultiplier(2)->Range(8, 128);
BENCHMARK(BM_ContextSweep<false>)->Name("context_sweep/serial")->Arg(10)->Arg(50)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ContextSweep<true>)->Name("context_sweep/omp")->Arg(10)->Arg(50)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
