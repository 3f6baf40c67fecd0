#include <benchmark/benchmark.h>

#include <vector>

#include "dsm/forward_bie.hpp"
#include "dsm/indicators.hpp"
#include "dsm/specfun.hpp"

using namespace dsm;

static void BM_BesselJY01(benchmark::State &state) {
  double x = 0.5;
  for (auto _ : state) {
    benchmark::DoNotOptimize(specfun::bessel_jy01(x));
    x = x < 60.0 ? x + 0.37 : 0.5;
  }
}
BENCHMARK(BM_BesselJY01);

static void BM_BesselSequence(benchmark::State &state) {
  const int nmax = static_cast<int>(state.range(0));
  std::vector<double> j(nmax + 1), y(nmax + 1);
  for (auto _ : state) {
    specfun::bessel_jy_sequence(nmax, 20.0, j, y);
    benchmark::DoNotOptimize(j.data());
  }
}
BENCHMARK(BM_BesselSequence)->Arg(30)->Arg(120);

static void BM_SoftKiteSolve(benchmark::State &state) {
  const auto kite = ParametricBoundary::kite({0.0, 0.0}, static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_obstacle(kite, BoundaryCondition::soft(), 20.0, {1.0, 0.0}));
  }
}
BENCHMARK(BM_SoftKiteSolve)->Arg(320)->Unit(benchmark::kMillisecond);

static void BM_IndicatorI1(benchmark::State &state) {
  const PointScattererSet pts({{1, 1}, {-1, -1}}, {1.0, 1.0});
  const auto pairs = make_direction_pairs(1, static_cast<int>(state.range(0)));
  const FarFieldDataset d =
      assemble_dataset(Scene::point_set(pts), pairs, 10.0, 20.0, 20, ForwardModel::foldy, {.workers = 1});
  const SamplingGrid grid;
  for (auto _ : state) benchmark::DoNotOptimize(indicator_I1(d, grid));
}
BENCHMARK(BM_IndicatorI1)->Arg(1)->Arg(32)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
