#include "bench_support.hpp"

#include "tandem/goal_select.hpp"
#include "tandem/planner.hpp"
#include "tandem/yaw_optimizer.hpp"

#include <benchmark/benchmark.h>

namespace tandem {
namespace {

void BM_DistributeFrontiers(benchmark::State& state) {
  const bench::Scenario scenario = bench::exploredMaze();
  const AgentSpec ugv = AgentSpec::defaultUgv();
  const AgentSpec uav = AgentSpec::defaultUav();
  const Corridor ground = computeGroundCorridor(scenario.map, ugv, scenario.ugvPose);
  const Corridor aerial = computeAerialCorridor(scenario.map, uav, scenario.uavPose);
  for (auto _ : state) {
    auto partition =
        distributeFrontiers(scenario.frontiers, ground, aerial, scenario.map);
    benchmark::DoNotOptimize(partition);
  }
  state.SetItemsProcessed(state.iterations() *
                          static_cast<std::int64_t>(scenario.frontiers.size()));
}
BENCHMARK(BM_DistributeFrontiers);

void BM_RenderViewQuality(benchmark::State& state) {
  const bench::Scenario scenario = bench::exploredMaze();
  const AgentSpec ugv = AgentSpec::defaultUgv();
  const Corridor corridor = computeGroundCorridor(scenario.map, ugv, scenario.ugvPose);
  const AgentFrontiers assigned =
      distributeToAgent(scenario.frontiers, corridor, scenario.map);
  for (auto _ : state) {
    auto image = renderViewQuality(corridor, assigned.frontiers, scenario.map,
                                   static_cast<int>(state.range(0)), 9);
    benchmark::DoNotOptimize(image);
  }
  state.SetItemsProcessed(state.iterations() *
                          static_cast<std::int64_t>(corridor.cells.size()));
}
BENCHMARK(BM_RenderViewQuality)->Arg(10)->Arg(50)->Arg(200);

void BM_PlanRrtAerial(benchmark::State& state) {
  const bench::Scenario scenario = bench::exploredMaze();
  const AgentSpec uav = AgentSpec::defaultUav();
  const Corridor corridor = computeAerialCorridor(scenario.map, uav, scenario.uavPose);
  const Viewpoint goal{corridor.cellCenter(corridor.cells.back()), 0.0};
  RrtParams params;
  params.samplingBox = corridor.boundingBox();
  std::uint64_t seed = 1;
  for (auto _ : state) {
    params.seed = seed++;
    auto path = planRrt(scenario.map, uav, scenario.uavPose, goal, params);
    benchmark::DoNotOptimize(path);
  }
}
BENCHMARK(BM_PlanRrtAerial);

void BM_OptimizePathYaw(benchmark::State& state) {
  const bench::Scenario scenario = bench::exploredMaze();
  const AgentSpec uav = AgentSpec::defaultUav();
  const Corridor corridor = computeAerialCorridor(scenario.map, uav, scenario.uavPose);
  const Viewpoint goal{corridor.cellCenter(corridor.cells.back()), 0.0};
  RrtParams params;
  params.samplingBox = corridor.boundingBox();
  params.seed = 5;
  const auto path = planRrt(scenario.map, uav, scenario.uavPose, goal, params);
  if (!path) {
    state.SkipWithError("no path");
    return;
  }
  const Path dense = densifyPath(*path, 0.9);
  for (auto _ : state) {
    auto result = optimizePathYaw(dense, scenario.map, scenario.frontiers, uav,
                                  SoftVisibilityParams{});
    benchmark::DoNotOptimize(result);
  }
}
BENCHMARK(BM_OptimizePathYaw);

}  // namespace
}  // namespace tandem

BENCHMARK_MAIN();
