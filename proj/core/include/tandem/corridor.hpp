#pragma once

#include "tandem/agent.hpp"
#include "tandem/geometry.hpp"
#include "tandem/occupancy_map.hpp"

#include <map>
#include <vector>

namespace tandem {

/// Known-free, agent-reachable region of the current map. Ground corridors
/// live on a single base-resolution z layer; aerial corridors are coarse
/// blocks whose edge is at least the agent's collision edge.
struct Corridor {
  AgentSpec agent;
  GridGeometry mapGeometry;
  /// 1 for ground corridors (base voxels); coarse block factor otherwise.
  int coarseFactor = 1;
  /// z index of the ground plane layer; -1 for aerial corridors.
  int planeLayer = -1;
  /// Sorted cell keys: base keys (ground) or block keys (aerial).
  std::vector<VoxelKey> cells;

  double cellSize() const { return coarseFactor * mapGeometry.resolution; }
  bool empty() const { return cells.empty(); }
  bool contains(const VoxelKey& cell) const;

  /// World-space center of a corridor cell. Ground cells are centered at the
  /// agent's sensor height.
  Vec3 cellCenter(const VoxelKey& cell) const;

  /// Tight bounding box of the corridor cells (empty box when no cells).
  Box3 boundingBox() const;
};

/// Smallest power-of-two factor whose coarse cell edge covers the agent's
/// collision edge.
int aerialCoarseFactor(double resolution, const Vec3& collisionHalfExtents);

/// Base voxels on the agent's sensor-height layer whose surrounding
/// collision box contains only Free voxels, restricted to the 4-connected
/// component containing q0. Empty when q0's own cell is invalid.
Corridor computeGroundCorridor(const OccupancyMap& map, const AgentSpec& agent,
                               const Viewpoint& q0);

/// Fully-Free coarse blocks restricted to the 6-connected component
/// containing q0's block. Empty when that block is not fully free.
Corridor computeAerialCorridor(const OccupancyMap& map, const AgentSpec& agent,
                               const Viewpoint& q0);

/// Sensor-geometry feasibility, ignoring occlusion: could a sensor placed at
/// `candidate` see `frontier` for some yaw? Ground agents use their fixed
/// sensor height and the vertical-FOV cone constraint; aerial agents use
/// range plus elevation angle.
bool feasibleRegionContains(const AgentSpec& agent, const Vec3& frontier,
                            const Vec3& candidate);

/// One agent's pass of the frontier-distribution procedure: a frontier is
/// kept iff some corridor cell lies in its feasible region and an
/// unobstructed ray connects them. Returns kept frontiers (sorted) plus the
/// witness cell found for each.
struct AgentFrontiers {
  std::vector<VoxelKey> frontiers;
  std::map<VoxelKey, VoxelKey> witness;
};
AgentFrontiers distributeToAgent(const std::vector<VoxelKey>& frontiers,
                                 const Corridor& corridor, const OccupancyMap& map,
                                 int threads = 1);

/// Exclusive two-agent partition: the ground agent is served first, the
/// aerial agent gets its pass over the remainder.
struct FrontierPartition {
  AgentFrontiers ground;
  AgentFrontiers aerial;
};
FrontierPartition distributeFrontiers(const std::vector<VoxelKey>& frontiers,
                                      const Corridor& groundCorridor,
                                      const Corridor& aerialCorridor,
                                      const OccupancyMap& map, int threads = 1);

}  // namespace tandem
