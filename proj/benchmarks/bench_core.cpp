// Copyright 2026 The carnot-beta Authors
// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include <vector>

#include "carnot/gauge.hpp"
#include "carnot/hypersurface.hpp"
#include "carnot/slice.hpp"

using namespace carnot;

namespace {

const GroupModel kH1 = GroupModel::heisenberg(1);

void BM_Multiply(benchmark::State& state) {
  const GroupModel g = GroupModel::heisenberg(static_cast<int>(state.range(0)));
  const std::size_t n = static_cast<std::size_t>(g.dimension());
  std::vector<double> p(n, 0.3), q(n, -0.7), out(n);
  for (auto _ : state) {
    g.multiply(p, q, out);
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(BM_Multiply)->Arg(1)->Arg(4);

void BM_Norm(benchmark::State& state) {
  const Gauge gauge = state.range(0) == 0 ? Gauge::koranyi(kH1) : Gauge::star_ball(kH1, 0.5);
  Rng rng(1);
  std::vector<double> p(3);
  for (auto _ : state) {
    for (double& v : p) v = rng.uniform(-1.0, 1.0);
    benchmark::DoNotOptimize(gauge.norm(std::span<const double>(p)));
  }
}
BENCHMARK(BM_Norm)->Arg(0)->Arg(1);

void BM_SliceArea(benchmark::State& state) {
  const Gauge gauge = Gauge::koranyi(kH1);
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(slice_area(gauge, Direction{1, 0}, 0.3, state.range(0), ++seed));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SliceArea)->Arg(100000);

void BM_PerimeterSampler(benchmark::State& state) {
  const Gauge gauge = Gauge::koranyi(kH1);
  const SurfaceSpec s = coordinate_plane(kH1, Point{1, 0, 0});
  std::uint64_t seed = 0;
  for (auto _ : state) {
    const PerimeterSampler sampler(s, gauge, 0.1, Point{1, 0, 0}, 0.2, state.range(0), ++seed);
    benchmark::DoNotOptimize(sampler.evaluate(Point{1, 0, 0}, 0.1));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_PerimeterSampler)->Arg(100000);

void BM_SamplerEvaluate(benchmark::State& state) {
  const Gauge gauge = Gauge::koranyi(kH1);
  const SurfaceSpec s = coordinate_plane(kH1, Point{1, 0, 0});
  const PerimeterSampler sampler(s, gauge, 0.1, Point{1, 0, 0}, 0.2, 200000, 1);
  for (auto _ : state) benchmark::DoNotOptimize(sampler.evaluate(Point{1.02, 0.0, 0.0}, 0.1));
}
BENCHMARK(BM_SamplerEvaluate);

}  // namespace

BENCHMARK_MAIN();
