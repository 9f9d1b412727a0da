#include <benchmark/benchmark.h>

#include <Eigen/Dense>
#include <vector>

#include "pksvm/dataset.hpp"
#include "pksvm/kernel.hpp"
#include "pksvm/psd_linalg.hpp"
#include "pksvm/rng.hpp"

namespace {

using pksvm::GaussianPoint;
using pksvm::KernelParams;
using pksvm::SymMatrix;

GaussianPoint random_point(Eigen::Index n, pksvm::rng::Engine& gen) {
  Eigen::VectorXd mean(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    mean(i) = 4.0 * pksvm::rng::uniform01(gen) - 2.0;
  }
  Eigen::MatrixXd a(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      a(i, j) = 0.8 * pksvm::rng::uniform01(gen) - 0.4;
    }
  }
  return GaussianPoint(std::move(mean), SymMatrix::Symmetrized(a.transpose() * a));
}

void bm_rbf_kernel(benchmark::State& state) {
  pksvm::rng::Engine gen(1);
  const Eigen::VectorXd x = Eigen::VectorXd::Random(state.range(0));
  const Eigen::VectorXd y = Eigen::VectorXd::Random(state.range(0));
  const KernelParams params(1.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(pksvm::rbf_kernel(x, y, params));
  }
}
BENCHMARK(bm_rbf_kernel)->Arg(2)->Arg(8)->Arg(32);

void bm_pk_kernel(benchmark::State& state) {
  pksvm::rng::Engine gen(2);
  const GaussianPoint a = random_point(state.range(0), gen);
  const GaussianPoint b = random_point(state.range(0), gen);
  const KernelParams params(1.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(pksvm::pk_kernel(a, b, params));
  }
}
BENCHMARK(bm_pk_kernel)->Arg(2)->Arg(8)->Arg(32);

void bm_pk_kernel_with_sqrts(benchmark::State& state) {
  pksvm::rng::Engine gen(3);
  const GaussianPoint a = random_point(state.range(0), gen);
  const GaussianPoint b = random_point(state.range(0), gen);
  const Eigen::MatrixXd sqrt_a = pksvm::sym_psd_sqrt(a.cov()).mat();
  const Eigen::MatrixXd sqrt_b = pksvm::sym_psd_sqrt(b.cov()).mat();
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        pksvm::pk_kernel_with_sqrts(a.mean(), sqrt_a, b.mean(), sqrt_b, 1.0));
  }
}
BENCHMARK(bm_pk_kernel_with_sqrts)->Arg(2)->Arg(8)->Arg(32);

void bm_gram_matrix(benchmark::State& state) {
  pksvm::rng::Engine gen(4);
  std::vector<GaussianPoint> points;
  for (int i = 0; i < state.range(0); ++i) {
    points.push_back(random_point(2, gen));
  }
  const KernelParams params(1.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(pksvm::gram_matrix(points, params));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(bm_gram_matrix)->Arg(50)->Arg(100)->Arg(200)->Arg(400)->Complexity();

void bm_monte_carlo_kernel(benchmark::State& state) {
  pksvm::rng::Engine gen(5);
  const GaussianPoint a = random_point(2, gen);
  const GaussianPoint b = random_point(2, gen);
  const KernelParams params(1.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(pksvm::monte_carlo_kernel(a, b, params, state.range(0), 99));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(bm_monte_carlo_kernel)->Arg(10000)->Arg(100000);

}  // namespace

BENCHMARK_MAIN();
