#pragma once

// Shared scenario builders: observed rooms, iid random tri-state maps and
// partially explored worlds. Test-only.

#include "tandem/exploration.hpp"
#include "tandem/frontier.hpp"
#include "tandem/occupancy_map.hpp"
#include "tandem/rng.hpp"
#include "tandem/world.hpp"

#include <cstdint>
#include <vector>

namespace tandem::testing {

inline GridGeometry cubeGeometry(int n, double res = 0.3) {
  GridGeometry g;
  g.origin = Vec3::Zero();
  g.resolution = res;
  g.nx = n;
  g.ny = n;
  g.nz = n;
  return g;
}

/// Fully observed empty room: occupied shell, free interior.
inline OccupancyMap observedRoomMap(int nx, int ny, int nz, double res = 0.3) {
  GridGeometry g;
  g.origin = Vec3::Zero();
  g.resolution = res;
  g.nx = nx;
  g.ny = ny;
  g.nz = nz;
  std::vector<std::uint8_t> states(g.voxelCount());
  for (int iz = 0; iz < nz; ++iz) {
    for (int iy = 0; iy < ny; ++iy) {
      for (int ix = 0; ix < nx; ++ix) {
        const bool shell =
            ix == 0 || iy == 0 || iz == 0 || ix == nx - 1 || iy == ny - 1 || iz == nz - 1;
        states[g.linearIndex(VoxelKey{ix, iy, iz})] =
            shell ? static_cast<std::uint8_t>(OccupancyState::Occupied)
                  : static_cast<std::uint8_t>(OccupancyState::Free);
      }
    }
  }
  return OccupancyMap::fromTriState(g, states);
}

/// iid tri-state noise map.
inline OccupancyMap randomTriStateMap(std::uint64_t seed, int n, double pFree,
                                      double pOccupied, double res = 0.3) {
  const GridGeometry g = cubeGeometry(n, res);
  std::vector<std::uint8_t> states(g.voxelCount());
  Rng rng(seed);
  for (auto& s : states) {
    const double u = rng.uniform01();
    if (u < pFree) {
      s = static_cast<std::uint8_t>(OccupancyState::Free);
    } else if (u < pFree + pOccupied) {
      s = static_cast<std::uint8_t>(OccupancyState::Occupied);
    } else {
      s = static_cast<std::uint8_t>(OccupancyState::Unknown);
    }
  }
  return OccupancyMap::fromTriState(g, states);
}

/// Fully explored map of a ground-truth world (no Unknown voxels).
inline OccupancyMap mapFromWorld(const GroundTruthWorld& world) {
  const GridGeometry& g = world.geometry();
  std::vector<std::uint8_t> states(g.voxelCount());
  for (std::size_t i = 0; i < states.size(); ++i) {
    states[i] = world.raw()[i] ? static_cast<std::uint8_t>(OccupancyState::Occupied)
                               : static_cast<std::uint8_t>(OccupancyState::Free);
  }
  return OccupancyMap::fromTriState(g, states);
}

/// Map produced by integrating a few scans of a generated maze, plus its
/// frontier set. Realistic mid-exploration structure for goal and optimizer
/// tests.
struct ExploredScene {
  GroundTruthWorld world;
  OccupancyMap map;
  std::vector<VoxelKey> frontiers;
  Viewpoint ugvPose;
  Viewpoint uavPose;

  ExploredScene(GroundTruthWorld w, OccupancyMap m) : world(std::move(w)), map(std::move(m)) {}
};

inline ExploredScene partiallyExploredMaze(std::uint64_t seed, int scanPoses = 3,
                                           int cells = 4) {
  MazeConfig config;
  config.seed = seed;
  config.cellsX = cells;
  config.cellsY = cells;
  GroundTruthWorld world = generateMaze(config);
  OccupancyMap map(world.bounds(), world.resolution());

  const AgentSpec ugv = AgentSpec::defaultUgv();
  const AgentSpec uav = AgentSpec::defaultUav();
  const Viewpoint ugvStart = autoGroundStart(world, ugv);
  const Viewpoint uavStart = autoAerialStart(world, uav);

  map.markFreeBox(Box3(ugvStart.position - ugv.collisionHalfExtents,
                       ugvStart.position + ugv.collisionHalfExtents));
  const GridGeometry& g = world.geometry();
  const int factor = aerialCoarseFactor(g.resolution, uav.collisionHalfExtents);
  const VoxelKey base = g.keyOf(uavStart.position);
  const Vec3 lo = g.origin + g.resolution * factor *
                                 Vec3(base.ix / factor, base.iy / factor, base.iz / factor);
  map.markFreeBox(Box3(lo, lo + Vec3::Constant(g.resolution * factor)));

  Rng rng(Rng::deriveSeed(seed, 0x5363656eULL));
  for (int pose = 0; pose < scanPoses; ++pose) {
    for (int k = 0; k < 4; ++k) {
      const Viewpoint vp{uavStart.position, wrapToPi(k * kPi / 2.0 + pose * 0.3)};
      map.integrateScan(vp.position, simulateScan(world, uav.sensor, vp));
    }
    map.integrateScan(ugvStart.position,
                      simulateScan(world, ugv.sensor,
                                   Viewpoint{ugvStart.position, rng.uniform(-kPi, kPi)}));
  }

  ExploredScene scene(std::move(world), std::move(map));
  const auto frontierSet = batchFrontiers(scene.map);
  scene.frontiers.assign(frontierSet.begin(), frontierSet.end());
  scene.ugvPose = ugvStart;
  scene.uavPose = uavStart;
  return scene;
}

}  // namespace tandem::testing
