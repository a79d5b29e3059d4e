#pragma once

// Shared benchmark scenario: a maze with a few scans integrated, the typical
// workload shape for the mapping and planning paths.

#include "tandem/corridor.hpp"
#include "tandem/frontier.hpp"
#include "tandem/world.hpp"

#include <utility>
#include <vector>

namespace tandem::bench {

struct Scenario {
  GroundTruthWorld world;
  OccupancyMap map;
  std::vector<VoxelKey> frontiers;
  Viewpoint ugvPose;
  Viewpoint uavPose;

  Scenario(GroundTruthWorld w, OccupancyMap m)
      : world(std::move(w)), map(std::move(m)) {}
};

inline Scenario exploredMaze(int scans = 4) {
  MazeConfig config;
  config.seed = 12;
  GroundTruthWorld world = generateMaze(config);
  OccupancyMap map(world.bounds(), world.resolution());

  const AgentSpec ugv = AgentSpec::defaultUgv();
  const AgentSpec uav = AgentSpec::defaultUav();
  const Viewpoint ugvPose = autoGroundStart(world, ugv);
  const Viewpoint uavPose = autoAerialStart(world, uav);
  map.markFreeBox(Box3(ugvPose.position - ugv.collisionHalfExtents,
                       ugvPose.position + ugv.collisionHalfExtents));
  map.markFreeBox(Box3(uavPose.position - Vec3::Constant(0.6),
                       uavPose.position + Vec3::Constant(0.6)));
  for (int i = 0; i < scans; ++i) {
    const Viewpoint vp{uavPose.position, i * kPi / 2.0};
    map.integrateScan(vp.position, simulateScan(world, uav.sensor, vp));
    map.integrateScan(ugvPose.position,
                      simulateScan(world, ugv.sensor, Viewpoint{ugvPose.position, 0.0}));
  }

  Scenario scenario(std::move(world), std::move(map));
  const auto frontierSet = batchFrontiers(scenario.map);
  scenario.frontiers.assign(frontierSet.begin(), frontierSet.end());
  scenario.ugvPose = ugvPose;
  scenario.uavPose = uavPose;
  return scenario;
}

}  // namespace tandem::bench
