#include "tandem/corridor.hpp"

#include "tandem/frontier.hpp"
#include "tandem/rng.hpp"
#include "support/oracles.hpp"
#include "support/scenarios.hpp"

#include <gtest/gtest.h>

#include <deque>

namespace tandem {
namespace {

using testing::observedRoomMap;
using testing::partiallyExploredMaze;

// Flood fill over brute-force collision-checked plane cells.
std::vector<VoxelKey> groundCorridorBrute(const OccupancyMap& map, const AgentSpec& agent,
                                          const Viewpoint& q0) {
  const GridGeometry& g = map.geometry();
  const int layer = g.keyOf(Vec3(g.origin.x(), g.origin.y(), agent.sensorHeight)).iz;
  const auto valid = [&](int ix, int iy) {
    Vec3 center = g.centerOf(VoxelKey{ix, iy, layer});
    center.z() = agent.sensorHeight;
    return testing::stateValidBrute(map, agent, Viewpoint{center, 0.0});
  };
  std::vector<VoxelKey> cells;
  const VoxelKey start = g.keyOf(q0.position);
  if (!valid(start.ix, start.iy)) return cells;
  std::vector<std::uint8_t> seen(static_cast<std::size_t>(g.nx) * g.ny, 0);
  std::deque<std::pair<int, int>> queue{{start.ix, start.iy}};
  seen[static_cast<std::size_t>(start.iy) * g.nx + start.ix] = 1;
  constexpr int kDirs[4][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
  while (!queue.empty()) {
    const auto [ix, iy] = queue.front();
    queue.pop_front();
    cells.push_back(VoxelKey{ix, iy, layer});
    for (const auto& d : kDirs) {
      const int jx = ix + d[0];
      const int jy = iy + d[1];
      if (jx < 0 || jy < 0 || jx >= g.nx || jy >= g.ny) continue;
      auto& mark = seen[static_cast<std::size_t>(jy) * g.nx + jx];
      if (mark) continue;
      mark = 1;
      if (valid(jx, jy)) queue.push_back({jx, jy});
    }
  }
  std::sort(cells.begin(), cells.end());
  return cells;
}

TEST(GroundCorridor, FullFloorMinusCollisionMargin) {
  OccupancyMap map = observedRoomMap(14, 14, 8);
  const AgentSpec ugv = AgentSpec::defaultUgv();
  const Viewpoint q0{Vec3(2.0, 2.0, ugv.sensorHeight), 0.0};
  const Corridor corridor = computeGroundCorridor(map, ugv, q0);
  ASSERT_FALSE(corridor.empty());
  // Half extent 0.5 m (> one voxel) keeps centers two voxel rings off the
  // walls: valid ix in [3, 10] for a 14-voxel room with a 1-voxel shell.
  for (const VoxelKey& cell : corridor.cells) {
    EXPECT_GE(cell.ix, 3);
    EXPECT_LE(cell.ix, 10);
    EXPECT_GE(cell.iy, 3);
    EXPECT_LE(cell.iy, 10);
    EXPECT_EQ(cell.iz, corridor.planeLayer);
  }
  EXPECT_EQ(corridor.cells.size(), 8u * 8u);
  EXPECT_EQ(corridor.cells, groundCorridorBrute(map, ugv, q0));
}

TEST(GroundCorridor, WallRestrictsReachability) {
  const GridGeometry g = testing::cubeGeometry(14);
  std::vector<std::uint8_t> states(g.voxelCount(),
                                   static_cast<std::uint8_t>(OccupancyState::Free));
  for (int iz = 0; iz < g.nz; ++iz) {
    for (int iy = 0; iy < g.ny; ++iy) {
      states[g.linearIndex(VoxelKey{7, iy, iz})] =
          static_cast<std::uint8_t>(OccupancyState::Occupied);
    }
  }
  OccupancyMap map = OccupancyMap::fromTriState(g, states);
  const AgentSpec ugv = AgentSpec::defaultUgv();
  const Corridor corridor =
      computeGroundCorridor(map, ugv, Viewpoint{Vec3(1.0, 2.0, ugv.sensorHeight), 0.0});
  ASSERT_FALSE(corridor.empty());
  for (const VoxelKey& cell : corridor.cells) EXPECT_LT(cell.ix, 7);
}

TEST(GroundCorridor, InvalidStartGivesEmptyCorridor) {
  OccupancyMap fresh(Box3(Vec3(0, 0, 0), Vec3(4, 4, 2)), 0.3);  // all Unknown
  const AgentSpec ugv = AgentSpec::defaultUgv();
  EXPECT_TRUE(
      computeGroundCorridor(fresh, ugv, Viewpoint{Vec3(2, 2, ugv.sensorHeight), 0.0})
          .empty());
}

TEST(GroundCorridor, MatchesBruteForceOnExploredMaze) {
  const auto scene = partiallyExploredMaze(42);
  const AgentSpec ugv = AgentSpec::defaultUgv();
  const Corridor corridor = computeGroundCorridor(scene.map, ugv, scene.ugvPose);
  EXPECT_EQ(corridor.cells, groundCorridorBrute(scene.map, ugv, scene.ugvPose));
}

TEST(AerialCorridor, FactorFromCollisionEdge) {
  EXPECT_EQ(aerialCoarseFactor(0.3, Vec3::Constant(0.4)), 4);  // 0.8 m cube
  EXPECT_EQ(aerialCoarseFactor(0.3, Vec3::Constant(0.15)), 1);
  EXPECT_EQ(aerialCoarseFactor(0.3, Vec3::Constant(0.3)), 2);
  EXPECT_EQ(aerialCoarseFactor(0.1, Vec3::Constant(0.4)), 8);
}

TEST(AerialCorridor, EmptyWhenNoFullBlockIsFree) {
  OccupancyMap fresh(Box3(Vec3(0, 0, 0), Vec3(4.8, 4.8, 4.8)), 0.3);
  const AgentSpec uav = AgentSpec::defaultUav();
  EXPECT_TRUE(
      computeAerialCorridor(fresh, uav, Viewpoint{Vec3(2.4, 2.4, 2.4), 0.0}).empty());
}

TEST(AerialCorridor, OpenCubeMatchesExhaustiveBlockScan) {
  // 4.8 m observed cube: interior blocks are fully free.
  OccupancyMap map = observedRoomMap(18, 18, 18);
  const AgentSpec uav = AgentSpec::defaultUav();
  const Viewpoint q0{Vec3(2.7, 2.7, 2.7), 0.0};
  const Corridor corridor = computeAerialCorridor(map, uav, q0);
  ASSERT_FALSE(corridor.empty());
  EXPECT_EQ(corridor.coarseFactor, 4);
  // All fully-free blocks are mutually reachable here, so the corridor is
  // exactly the brute-force block scan.
  EXPECT_EQ(corridor.cells, testing::coarseFreeBrute(map, 4));
}

TEST(FeasibleRegion, GroundGeometry) {
  const AgentSpec ugv = AgentSpec::defaultUgv();  // d_max 6, fovV 40 deg, h0 0.75
  const double h0 = ugv.sensorHeight;
  // Frontier at sensor height, 1 m away: inside.
  EXPECT_TRUE(feasibleRegionContains(ugv, Vec3(1.0, 0.0, h0), Vec3(0, 0, 0)));
  // 1 m above sensor height at r = 2 m: outside the 20 deg half-cone
  // (needs r >= 1/tan(20 deg) ~ 2.747 m).
  EXPECT_FALSE(feasibleRegionContains(ugv, Vec3(2.0, 0.0, h0 + 1.0), Vec3(0, 0, 0)));
  EXPECT_TRUE(feasibleRegionContains(ugv, Vec3(2.8, 0.0, h0 + 1.0), Vec3(0, 0, 0)));
  // Range bound: r^2 + dh^2 <= d_max^2.
  EXPECT_FALSE(feasibleRegionContains(ugv, Vec3(6.1, 0.0, h0), Vec3(0, 0, 0)));
  // Directly above: never visible to the ring sensor.
  EXPECT_FALSE(feasibleRegionContains(ugv, Vec3(0.0, 0.0, h0 + 1.0), Vec3(0, 0, 0)));
}

TEST(FeasibleRegion, AerialGeometry) {
  const AgentSpec uav = AgentSpec::defaultUav();  // d_max 10, fovV 72 deg
  EXPECT_TRUE(feasibleRegionContains(uav, Vec3(5, 0, 2), Vec3(0, 0, 2)));
  EXPECT_FALSE(feasibleRegionContains(uav, Vec3(10.5, 0, 2), Vec3(0, 0, 2)));
  // Elevation limit 36 deg: dz = r * tan(36 deg) is the edge.
  EXPECT_TRUE(feasibleRegionContains(uav, Vec3(2, 0, 2 + 1.4), Vec3(0, 0, 2)));
  EXPECT_FALSE(feasibleRegionContains(uav, Vec3(2, 0, 2 + 1.6), Vec3(0, 0, 2)));
  EXPECT_FALSE(feasibleRegionContains(uav, Vec3(0, 0, 4), Vec3(0, 0, 2)));
}

TEST(Distribution, WallOcclusionExcludesFrontier) {
  // An occupied pocket whose unknown interior opens toward a slit too
  // narrow for the agent: the frontiers there are range- and FOV-feasible
  // from the corridor but every connecting ray crosses a pocket wall.
  const GridGeometry g = testing::cubeGeometry(16);
  std::vector<std::uint8_t> states(g.voxelCount(),
                                   static_cast<std::uint8_t>(OccupancyState::Free));
  const auto set = [&](int ix, int iy, int iz, OccupancyState s) {
    states[g.linearIndex(VoxelKey{ix, iy, iz})] = static_cast<std::uint8_t>(s);
  };
  // Pocket shell x in [9,13], y in [5,9], z in [1,4], hollow interior
  // unknown, the x = 13 face open toward the map edge.
  for (int ix = 9; ix <= 13; ++ix) {
    for (int iy = 5; iy <= 9; ++iy) {
      for (int iz = 1; iz <= 4; ++iz) {
        const bool interior = ix >= 10 && ix <= 12 && iy >= 6 && iy <= 8 && iz >= 2 &&
                              iz <= 3;
        const bool opening = ix == 13 && iy >= 6 && iy <= 8 && iz >= 2 && iz <= 3;
        if (interior) {
          set(ix, iy, iz, OccupancyState::Unknown);
        } else if (!opening) {
          set(ix, iy, iz, OccupancyState::Occupied);
        }
      }
    }
  }
  OccupancyMap map = OccupancyMap::fromTriState(g, states);
  const AgentSpec ugv = AgentSpec::defaultUgv();
  const Corridor corridor =
      computeGroundCorridor(map, ugv, Viewpoint{Vec3(1.0, 1.0, ugv.sensorHeight), 0.0});
  ASSERT_FALSE(corridor.empty());
  // The slit between pocket and map edge is 0.6 m: no corridor cell fits in
  // it or in front of the opening.
  for (const VoxelKey& cell : corridor.cells) {
    EXPECT_LT(cell.ix, 14);
    EXPECT_FALSE(cell.ix >= 9 && cell.iy >= 5 && cell.iy <= 9);
  }

  const auto frontierSet = batchFrontiers(map);
  const std::vector<VoxelKey> frontiers(frontierSet.begin(), frontierSet.end());
  ASSERT_FALSE(frontiers.empty());
  // Sanity: the frontiers are feasible from somewhere in the corridor.
  bool anyFeasible = false;
  for (const VoxelKey& f : frontiers) {
    for (const VoxelKey& cell : corridor.cells) {
      if (feasibleRegionContains(ugv, g.centerOf(f), corridor.cellCenter(cell))) {
        anyFeasible = true;
        break;
      }
    }
  }
  ASSERT_TRUE(anyFeasible);
  const AgentFrontiers assigned = distributeToAgent(frontiers, corridor, map);
  EXPECT_TRUE(assigned.frontiers.empty());
}

TEST(Distribution, HighFrontierGoesToAerialAgent) {
  const auto scene = partiallyExploredMaze(3);
  const AgentSpec ugv = AgentSpec::defaultUgv();
  const AgentSpec uav = AgentSpec::defaultUav();
  const Corridor ground = computeGroundCorridor(scene.map, ugv, scene.ugvPose);
  const Corridor aerial = computeAerialCorridor(scene.map, uav, scene.uavPose);
  ASSERT_FALSE(ground.empty());
  ASSERT_FALSE(aerial.empty());
  const FrontierPartition partition =
      distributeFrontiers(scene.frontiers, ground, aerial, scene.map);

  // Exclusive partition within the frontier set.
  std::vector<VoxelKey> inter;
  std::set_intersection(partition.ground.frontiers.begin(),
                        partition.ground.frontiers.end(),
                        partition.aerial.frontiers.begin(),
                        partition.aerial.frontiers.end(), std::back_inserter(inter));
  EXPECT_TRUE(inter.empty());
  for (const VoxelKey& f : partition.aerial.frontiers) {
    EXPECT_TRUE(std::binary_search(scene.frontiers.begin(), scene.frontiers.end(), f));
  }

  // Frontiers high above the walls are infeasible for the ground sensor
  // (dh > r * tan(20 deg) within 6 m), so any assigned one must be aerial.
  const double h0 = ugv.sensorHeight;
  for (const VoxelKey& f : partition.ground.frontiers) {
    const Vec3 fc = scene.map.geometry().centerOf(f);
    EXPECT_LT(fc.z() - h0, 6.0 * std::sin(20.0 * kPi / 180.0) + 0.3);
  }
}

TEST(Distribution, MatchesBruteForceOracle) {
  for (std::uint64_t seed : {11ULL, 12ULL, 13ULL}) {
    const auto scene = partiallyExploredMaze(seed);
    const AgentSpec ugv = AgentSpec::defaultUgv();
    const AgentSpec uav = AgentSpec::defaultUav();
    const Corridor ground = computeGroundCorridor(scene.map, ugv, scene.ugvPose);
    const Corridor aerial = computeAerialCorridor(scene.map, uav, scene.uavPose);
    const FrontierPartition partition =
        distributeFrontiers(scene.frontiers, ground, aerial, scene.map, 2);

    const std::set<VoxelKey> groundBrute =
        testing::distributionBrute(scene.frontiers, ground, scene.map);
    EXPECT_EQ(std::set<VoxelKey>(partition.ground.frontiers.begin(),
                                 partition.ground.frontiers.end()),
              groundBrute);

    std::vector<VoxelKey> remainder;
    std::set_difference(scene.frontiers.begin(), scene.frontiers.end(),
                        partition.ground.frontiers.begin(),
                        partition.ground.frontiers.end(), std::back_inserter(remainder));
    EXPECT_EQ(std::set<VoxelKey>(partition.aerial.frontiers.begin(),
                                 partition.aerial.frontiers.end()),
              testing::distributionBrute(remainder, aerial, scene.map));
  }
}

TEST(Distribution, WitnessesAreValid) {
  const auto scene = partiallyExploredMaze(21);
  const AgentSpec ugv = AgentSpec::defaultUgv();
  const Corridor ground = computeGroundCorridor(scene.map, ugv, scene.ugvPose);
  const AgentFrontiers assigned = distributeToAgent(scene.frontiers, ground, scene.map);
  for (const VoxelKey& f : assigned.frontiers) {
    const auto it = assigned.witness.find(f);
    ASSERT_NE(it, assigned.witness.end());
    const Vec3 fc = scene.map.geometry().centerOf(f);
    const Vec3 cc = ground.cellCenter(it->second);
    EXPECT_TRUE(feasibleRegionContains(ugv, fc, cc));
    EXPECT_TRUE(scene.map.rayCast(fc, cc));
  }
}

TEST(Distribution, ShrinkingCorridorIsMonotone) {
  const auto scene = partiallyExploredMaze(33);
  const AgentSpec ugv = AgentSpec::defaultUgv();
  Corridor ground = computeGroundCorridor(scene.map, ugv, scene.ugvPose);
  ASSERT_GT(ground.cells.size(), 4u);
  const AgentFrontiers full = distributeToAgent(scene.frontiers, ground, scene.map);

  Corridor shrunk = ground;
  shrunk.cells.resize(shrunk.cells.size() / 2);
  const AgentFrontiers reduced = distributeToAgent(scene.frontiers, shrunk, scene.map);
  for (const VoxelKey& f : reduced.frontiers) {
    EXPECT_TRUE(
        std::binary_search(full.frontiers.begin(), full.frontiers.end(), f));
  }
}

}  // namespace
}  // namespace tandem
