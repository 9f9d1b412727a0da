#include <benchmark/benchmark.h>

#include <Eigen/Dense>

#include "pksvm/dataset.hpp"
#include "pksvm/grid.hpp"
#include "pksvm/solver.hpp"

namespace {

using pksvm::KernelParams;
using pksvm::LabeledDataset;
using pksvm::SolverParams;

LabeledDataset reference_subset(std::size_t size) {
  const LabeledDataset full =
      pksvm::make_reference_dataset(pksvm::ReferenceVariant::kIsotropic, 17);
  LabeledDataset out;
  // interleave the two clusters so every prefix stays two-class
  for (std::size_t i = 0; i < size / 2; ++i) {
    out.add(full.points[i], full.labels[i]);
    out.add(full.points[200 + i], full.labels[200 + i]);
  }
  return out;
}

void bm_train(benchmark::State& state) {
  const LabeledDataset z = reference_subset(static_cast<std::size_t>(state.range(0)));
  SolverParams sp;
  sp.lambda = 0.001;
  const KernelParams kp(1.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(pksvm::train(z, kp, sp));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(bm_train)->Arg(50)->Arg(100)->Arg(200)->Arg(400)->Complexity()
    ->Unit(benchmark::kMillisecond);

void bm_decision_score(benchmark::State& state) {
  const LabeledDataset z = reference_subset(400);
  SolverParams sp;
  sp.lambda = 0.001;
  const pksvm::TrainedModel model = pksvm::train(z, KernelParams(1.0), sp);
  const pksvm::GaussianPoint query(Eigen::Vector2d(0.7, -0.3),
                                   pksvm::SymMatrix(0.09 * Eigen::Matrix2d::Identity()));
  for (auto _ : state) {
    benchmark::DoNotOptimize(pksvm::decision_score(model, query));
  }
}
BENCHMARK(bm_decision_score);

void bm_score_grid(benchmark::State& state) {
  const LabeledDataset z = reference_subset(400);
  SolverParams sp;
  sp.lambda = 0.001;
  const pksvm::TrainedModel model = pksvm::train(z, KernelParams(1.0), sp);
  const pksvm::SymMatrix cov(0.09 * Eigen::Matrix2d::Identity());
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        pksvm::score_grid(model, cov, {-2.0, 2.0}, {-2.0, 2.0}, n, n));
  }
}
BENCHMARK(bm_score_grid)->Arg(25)->Arg(50)->Unit(benchmark::kMillisecond);

void bm_boundary_probe(benchmark::State& state) {
  const LabeledDataset z = reference_subset(400);
  SolverParams sp;
  sp.lambda = 0.001;
  const pksvm::TrainedModel model = pksvm::train(z, KernelParams(1.0), sp);
  const pksvm::SymMatrix cov(0.09 * Eigen::Matrix2d::Identity());
  for (auto _ : state) {
    benchmark::DoNotOptimize(pksvm::mean_boundary_radius(model, cov));
  }
}
BENCHMARK(bm_boundary_probe)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
