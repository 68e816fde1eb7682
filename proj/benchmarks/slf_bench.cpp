// SPDX-License-Identifier: Apache-2.0
#include <benchmark/benchmark.h>

#include <random>

#include "slf/basis.hpp"
#include "slf/entropy.hpp"
#include "slf/fitting.hpp"
#include "slf/raht.hpp"
#include "slf/voxel.hpp"

namespace {

slf::VoxelCloud make_voxels(int count, int depth) {
  std::mt19937 rng(1);
  std::set<uint64_t> codes;
  uint32_t side = 1u << depth;
  while (static_cast<int>(codes.size()) < count)
    codes.insert(slf::morton_encode(rng() % side, rng() % side, rng() % side, depth));
  slf::VoxelCloud vox;
  vox.depth = depth;
  for (uint64_t c : codes) vox.coords.push_back(slf::morton_decode(c, depth));
  return vox;
}

void BM_BasisRow(benchmark::State& state) {
  slf::BasisSpec spec;  // N = 128
  slf::BasisEvaluator eval(spec);
  slf::DirectionParam d{0.7, -0.3};
  Eigen::VectorXd row;
  for (auto _ : state) {
    eval.row_into(d, row);
    benchmark::DoNotOptimize(row.data());
    d.theta += 1e-4;
    if (d.theta > M_PI) d.theta = -M_PI;
  }
}
BENCHMARK(BM_BasisRow);

void BM_RahtForward(benchmark::State& state) {
  int count = static_cast<int>(state.range(0));
  slf::VoxelCloud vox = make_voxels(count, 10);
  slf::RahtPlan plan = slf::RahtPlan::build(vox);
  std::vector<double> plane(static_cast<size_t>(count));
  std::mt19937 rng(2);
  std::normal_distribution<double> g(0.0, 30.0);
  for (double& v : plane) v = g(rng);
  for (auto _ : state) {
    auto coeffs = slf::raht_forward(plan, plane);
    benchmark::DoNotOptimize(coeffs.data());
  }
  state.SetItemsProcessed(state.iterations() * count);
}
BENCHMARK(BM_RahtForward)->Arg(4096)->Arg(65536);

void BM_RahtPlanBuild(benchmark::State& state) {
  slf::VoxelCloud vox = make_voxels(static_cast<int>(state.range(0)), 10);
  for (auto _ : state) {
    auto plan = slf::RahtPlan::build(vox);
    benchmark::DoNotOptimize(plan.steps.data());
  }
}
BENCHMARK(BM_RahtPlanBuild)->Arg(4096)->Arg(65536);

void BM_EntropyEncode(benchmark::State& state) {
  std::mt19937 rng(3);
  std::geometric_distribution<int> mag(0.1);
  std::bernoulli_distribution sign(0.5);
  std::vector<int64_t> levels(100000);
  for (auto& v : levels) {
    int64_t m = mag(rng);
    v = sign(rng) ? m : -m;
  }
  for (auto _ : state) {
    auto bytes = slf::entropy_encode(levels);
    benchmark::DoNotOptimize(bytes.data());
  }
  state.SetItemsProcessed(state.iterations() * levels.size());
}
BENCHMARK(BM_EntropyEncode);

void BM_FitRidge(benchmark::State& state) {
  int m = static_cast<int>(state.range(0));
  std::mt19937 rng(4);
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::MatrixXd mat(m, 128);
  Eigen::VectorXd c(m);
  for (int r = 0; r < m; ++r) {
    c[r] = 100.0 * g(rng);
    for (int col = 0; col < 128; ++col) mat(r, col) = g(rng);
  }
  for (auto _ : state) {
    Eigen::VectorXd a = slf::fit_ridge(c, mat, 0.8);
    benchmark::DoNotOptimize(a.data());
  }
}
BENCHMARK(BM_FitRidge)->Arg(16)->Arg(64)->Arg(256);

}  // namespace

BENCHMARK_MAIN();
