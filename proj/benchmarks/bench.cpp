// Copyright (c) 2026 the sparse-imager authors
// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include "simg/forward_model.hpp"
#include "simg/noise_collector.hpp"
#include "simg/resolution.hpp"
#include "simg/rng.hpp"
#include "simg/scenario.hpp"
#include "simg/sparse_solver.hpp"

using namespace simg;

namespace {

ImagingConfig bench_config(Index rows, Index cols) {
  ScenarioImaging im;
  im.receivers = 25;
  im.frequencies = 25;
  im.aperture_over_range = 0.5;
  im.bandwidth_ratio = 0.5;
  im.range = 100.0;
  im.grid_rows = rows;
  im.grid_cols = cols;
  im.grid_spacing = 0.5;
  return make_imaging_config(im);
}

void BM_BuildSensingMatrix(benchmark::State& state) {
  const Index side = state.range(0);
  const ImagingConfig config = bench_config(side, side);
  for (auto _ : state) {
    SensingMatrix a = build_sensing_matrix(config);
    benchmark::DoNotOptimize(a.entries.data());
  }
  state.SetItemsProcessed(state.iterations() * config.pixel_count());
}
BENCHMARK(BM_BuildSensingMatrix)->Arg(21)->Arg(41)->Unit(benchmark::kMillisecond);

void BM_GelmaIterations(benchmark::State& state) {
  const ImagingConfig config = bench_config(31, 31);
  const SensingMatrix a = build_sensing_matrix(config);
  SourceScene scene;
  scene.sources.push_back({config.grid_point(15 * 31 + 15), Complex(1.0, 0.0)});
  scene.sources.push_back({config.grid_point(5 * 31 + 25), Complex(-0.4, 0.8)});
  const DataVector b = synthesize_data(scene, config);

  DenseOperator op(a.entries);
  GelmaSettings settings;
  settings.tau = 0.1 * op.apply_adjoint(b).cwiseAbs().maxCoeff();
  settings.residual_tol = 0.0;  // run exactly max_iters iterations
  settings.change_tol = 0.0;
  settings.max_iters = static_cast<int>(state.range(0));
  for (auto _ : state) {
    SolveResult r = gelma_solve(op, b, settings);
    benchmark::DoNotOptimize(r.solution.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_GelmaIterations)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_RandomCollector(benchmark::State& state) {
  const ImagingConfig config = bench_config(21, 21);
  const SensingMatrix a = build_sensing_matrix(config);
  RandomCollectorOptions options;
  options.sigma = state.range(0);
  options.sparsity = 4;
  options.seed = 1;
  options.coherence_cap = std::numeric_limits<double>::infinity();
  for (auto _ : state) {
    NoiseCollector c = build_random_collector(a, options);
    benchmark::DoNotOptimize(c.columns.data());
  }
  state.SetItemsProcessed(state.iterations() * options.sigma);
}
BENCHMARK(BM_RandomCollector)->Arg(2000)->Arg(12000)->Unit(benchmark::kMillisecond);

void BM_CoherenceNeighborCount(benchmark::State& state) {
  const Index side = state.range(0);
  const SensingMatrix a = build_sensing_matrix(bench_config(side, side));
  for (auto _ : state) {
    Index count = min_coherent_neighbor_count(a.entries, 1.0 / 16.0);
    benchmark::DoNotOptimize(count);
  }
}
BENCHMARK(BM_CoherenceNeighborCount)->Arg(21)->Arg(41)->Unit(benchmark::kMillisecond);

void BM_GreedyDecompose(benchmark::State& state) {
  GreedyFrameOptions options;
  options.sparsity = 2;
  options.seed = 3;
  options.candidate_budget = 200;
  options.stopping_samples = 100;
  const NoiseCollector frame = build_greedy_frame(CMatrix(6, 0), options);
  GaussianStream rng(4);
  CVector b = rng.cnormal_vector(6);
  b.normalize();
  for (auto _ : state) {
    GreedyDecomposition d = greedy_decompose(b, frame.columns, 2, 1e-8);
    benchmark::DoNotOptimize(d.coefficients.data());
  }
}
BENCHMARK(BM_GreedyDecompose);

}  // namespace

BENCHMARK_MAIN();
