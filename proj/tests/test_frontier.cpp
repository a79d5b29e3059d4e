#include "tandem/frontier.hpp"

#include "tandem/rng.hpp"
#include "support/oracles.hpp"
#include "support/scenarios.hpp"

#include <gtest/gtest.h>

namespace tandem {
namespace {

using testing::randomTriStateMap;

TEST(BatchFrontiers, FreshMapHasNone) {
  OccupancyMap map(Box3(Vec3(0, 0, 0), Vec3(3, 3, 3)), 0.3);
  EXPECT_TRUE(batchFrontiers(map).empty());
}

TEST(BatchFrontiers, SingleFreeVoxelInUnknownInterior) {
  const GridGeometry g = testing::cubeGeometry(7);
  std::vector<std::uint8_t> states(g.voxelCount(),
                                   static_cast<std::uint8_t>(OccupancyState::Unknown));
  states[g.linearIndex(VoxelKey{3, 3, 3})] =
      static_cast<std::uint8_t>(OccupancyState::Free);
  OccupancyMap map = OccupancyMap::fromTriState(g, states);
  const auto frontiers = batchFrontiers(map);
  EXPECT_EQ(frontiers.size(), 6u);
  EXPECT_TRUE(frontiers.contains(VoxelKey{2, 3, 3}));
  EXPECT_TRUE(frontiers.contains(VoxelKey{4, 3, 3}));
  EXPECT_TRUE(frontiers.contains(VoxelKey{3, 3, 4}));
}

TEST(BatchFrontiers, MatchesExhaustiveScan) {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    OccupancyMap map = randomTriStateMap(500 + seed, 16, 0.4, 0.2);
    EXPECT_EQ(batchFrontiers(map), testing::frontiersBrute(map));
  }
}

TEST(UpdateFrontiers, EmptyChangeSetIsIdentity) {
  OccupancyMap map = randomTriStateMap(9, 10, 0.5, 0.2);
  const auto frontiers = batchFrontiers(map);
  const auto updated = updateFrontiers(frontiers, map, {});
  EXPECT_EQ(updated, frontiers);
}

TEST(UpdateFrontiers, ObservedFrontierIsReplacedByItsUnknownNeighbors) {
  // A frontier voxel observed Free stops being a frontier; its Unknown
  // neighbors become frontiers.
  OccupancyMap map(Box3(Vec3(0, 0, 0), Vec3(3, 0.3, 0.3)), 0.3);
  const Vec3 origin(0.15, 0.15, 0.15);
  RayMeasurement ray{Vec3(0.45, 0.15, 0.15), false};
  auto frontiers = batchFrontiers(map);
  frontiers = updateFrontiers(std::move(frontiers), map,
                              map.integrateScan(origin, std::span(&ray, 1)));
  EXPECT_TRUE(frontiers.contains(VoxelKey{2, 0, 0}));

  ray.endpoint = Vec3(0.75, 0.15, 0.15);
  frontiers = updateFrontiers(std::move(frontiers), map,
                              map.integrateScan(origin, std::span(&ray, 1)));
  EXPECT_FALSE(frontiers.contains(VoxelKey{2, 0, 0}));
  EXPECT_TRUE(frontiers.contains(VoxelKey{3, 0, 0}));
  EXPECT_EQ(frontiers, batchFrontiers(map));
}

TEST(UpdateFrontiers, StaysEqualToBatchOverScanSequences) {
  Rng rng(123);
  for (int sequence = 0; sequence < 5; ++sequence) {
    MazeConfig config;
    config.seed = 900 + sequence;
    config.cellsX = 3;
    config.cellsY = 3;
    const GroundTruthWorld world = generateMaze(config);
    OccupancyMap map(world.bounds(), world.resolution());
    FrontierTracker tracker(map);
    SensorModel sensor = SensorModel::lidar360();
    sensor.raysH = 90;
    sensor.raysV = 8;

    for (int scan = 0; scan < 8; ++scan) {
      Vec3 origin;
      do {
        origin = Vec3(rng.uniform(0.4, world.bounds().max().x() - 0.4),
                      rng.uniform(0.4, world.bounds().max().y() - 0.4),
                      rng.uniform(0.4, world.bounds().max().z() - 0.4));
      } while (world.occupiedAt(origin));
      const auto rays = simulateScan(world, sensor, Viewpoint{origin, 0.0});
      tracker.applyScanChanges(map, map.integrateScan(origin, rays));
      ASSERT_EQ(tracker.frontiers(), batchFrontiers(map)) << "scan " << scan;
    }
  }
}

TEST(UpdateFrontiers, TouchesOnlyTheChangedNeighborhood) {
  OccupancyMap map(Box3(Vec3(0, 0, 0), Vec3(9.6, 9.6, 3.0)), 0.3);
  FrontierTracker tracker(map);
  const RayMeasurement ray{Vec3(2.0, 0.15, 0.15), false};
  const auto changed = map.integrateScan(Vec3(0.15, 0.15, 0.15), std::span(&ray, 1));
  tracker.applyScanChanges(map, changed);
  EXPECT_LE(tracker.lastVisitCount(), 7 * changed.size());
  EXPECT_LT(tracker.lastVisitCount(), map.geometry().voxelCount() / 10);
}

TEST(FrontierInvariant, FrontiersAreUnknownVoxels) {
  OccupancyMap map = randomTriStateMap(321, 12, 0.5, 0.25);
  for (const VoxelKey& key : batchFrontiers(map)) {
    EXPECT_EQ(map.state(key), OccupancyState::Unknown);
  }
}

}  // namespace
}  // namespace tandem
