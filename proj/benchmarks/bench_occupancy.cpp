#include "bench_support.hpp"

#include "tandem/frontier.hpp"
#include "tandem/rng.hpp"

#include <benchmark/benchmark.h>

namespace tandem {
namespace {

void BM_IntegrateLidarScan(benchmark::State& state) {
  bench::Scenario scenario = bench::exploredMaze();
  const AgentSpec ugv = AgentSpec::defaultUgv();
  const auto scan = simulateScan(scenario.world, ugv.sensor, scenario.ugvPose);
  for (auto _ : state) {
    auto changed = scenario.map.integrateScan(scenario.ugvPose.position, scan);
    benchmark::DoNotOptimize(changed);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(scan.size()));
}
BENCHMARK(BM_IntegrateLidarScan);

void BM_SimulateCameraScan(benchmark::State& state) {
  const bench::Scenario scenario = bench::exploredMaze();
  const AgentSpec uav = AgentSpec::defaultUav();
  for (auto _ : state) {
    auto scan = simulateScan(scenario.world, uav.sensor, scenario.uavPose);
    benchmark::DoNotOptimize(scan);
  }
}
BENCHMARK(BM_SimulateCameraScan);

void BM_RayCast(benchmark::State& state) {
  const bench::Scenario scenario = bench::exploredMaze();
  const Box3 bounds = scenario.map.geometry().bounds();
  Rng rng(7);
  std::vector<std::pair<Vec3, Vec3>> segments;
  for (int i = 0; i < 512; ++i) {
    Vec3 a, b;
    for (int axis = 0; axis < 3; ++axis) {
      a[axis] = rng.uniform(bounds.min()[axis] + 1e-6, bounds.max()[axis] - 1e-6);
      b[axis] = rng.uniform(bounds.min()[axis] + 1e-6, bounds.max()[axis] - 1e-6);
    }
    segments.emplace_back(a, b);
  }
  std::size_t i = 0;
  for (auto _ : state) {
    const auto& [a, b] = segments[i++ & 511];
    benchmark::DoNotOptimize(scenario.map.rayCast(a, b));
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_RayCast);

void BM_FrontierUpdateIncremental(benchmark::State& state) {
  bench::Scenario scenario = bench::exploredMaze();
  const AgentSpec ugv = AgentSpec::defaultUgv();
  FrontierTracker tracker(scenario.map);
  const auto scan = simulateScan(scenario.world, ugv.sensor, scenario.ugvPose);
  for (auto _ : state) {
    const auto changed = scenario.map.integrateScan(scenario.ugvPose.position, scan);
    tracker.applyScanChanges(scenario.map, changed);
    benchmark::DoNotOptimize(tracker.size());
  }
}
BENCHMARK(BM_FrontierUpdateIncremental);

void BM_FrontierBatch(benchmark::State& state) {
  const bench::Scenario scenario = bench::exploredMaze();
  for (auto _ : state) {
    auto frontiers = batchFrontiers(scenario.map);
    benchmark::DoNotOptimize(frontiers);
  }
}
BENCHMARK(BM_FrontierBatch);

void BM_CoarseFreeVoxels(benchmark::State& state) {
  const bench::Scenario scenario = bench::exploredMaze();
  for (auto _ : state) {
    auto blocks = scenario.map.coarseFreeVoxels(4);
    benchmark::DoNotOptimize(blocks);
  }
}
BENCHMARK(BM_CoarseFreeVoxels);

}  // namespace
}  // namespace tandem

BENCHMARK_MAIN();
