#pragma once

#include "tandem/agent.hpp"
#include "tandem/geometry.hpp"
#include "tandem/occupancy_map.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

namespace tandem {

/// Ground-truth voxel world: a boolean occupancy grid with its origin at
/// (0, 0, 0). Generated worlds are closed (the boundary shell is occupied)
/// so every sensor ray terminates. Immutable once generated; scans may be
/// simulated concurrently.
class GroundTruthWorld {
 public:
  GroundTruthWorld(int nx, int ny, int nz, double resolution);

  const GridGeometry& geometry() const { return geom_; }
  double resolution() const { return geom_.resolution; }
  Box3 bounds() const { return geom_.bounds(); }

  bool occupied(const VoxelKey& key) const {
    return occupied_[geom_.linearIndex(key)] != 0;
  }
  bool occupiedAt(const Vec3& p) const {
    return geom_.inBounds(p) ? occupied(geom_.keyOf(p)) : true;
  }
  void setOccupied(const VoxelKey& key, bool value) {
    occupied_[geom_.linearIndex(key)] = value ? 1 : 0;
  }

  /// Marks the six boundary faces occupied.
  void closeShell();

  std::size_t occupiedCount() const;

  /// Binary voxel-world format: "VOXW", version 0x01, little-endian
  /// u32 nx/ny/nz, little-endian f32 resolution, then one byte per voxel in
  /// x-fastest order (0 free, 1 occupied).
  void save(const std::filesystem::path& path) const;
  void write(std::ostream& out) const;
  static GroundTruthWorld load(const std::filesystem::path& path);

  const std::vector<std::uint8_t>& raw() const { return occupied_; }

 private:
  GridGeometry geom_;
  std::vector<std::uint8_t> occupied_;
};

struct MazeConfig {
  std::uint64_t seed = 1;
  int cellsX = 8;
  int cellsY = 8;
  /// Tall relative to the corridor width, so corridor floors are visible
  /// from the sky only along a corridor's own axis.
  double wallHeight = 2.4;
  double resolution = 0.3;
  /// Corridor width in voxels; walls are one voxel thick.
  int corridorVoxels = 6;
};

/// Perfect maze: outer shell and floor occupied, every corridor cell
/// reachable from every other, plus one open-top trough mounted on a closed
/// wall whose interior is observable only from above wall height.
GroundTruthWorld generateMaze(const MazeConfig& config);

struct WarehouseConfig {
  std::uint64_t seed = 1;
  int nx = 64;
  int ny = 64;
  int nz = 16;
  double resolution = 0.3;
  double shelfHeight = 1.5;
  int shelfDepthVoxels = 2;
  int aisleVoxels = 6;
  int gapsPerRow = 2;
};

/// Shelf rows with randomly placed gaps; open air above the shelves.
GroundTruthWorld generateWarehouse(const WarehouseConfig& config);

struct MultiLevelConfig {
  std::uint64_t seed = 1;
  int nx = 40;
  int ny = 40;
  int nz = 17;
  double resolution = 0.3;
  /// z index of the one-voxel slab separating the two levels.
  int slabLayer = 8;
  /// Edge length of the square hole through the slab, in voxels.
  int holeVoxels = 8;
  int cratesPerLevel = 6;
};

/// Two stacked floors connected only by a hole in the separating slab, with
/// a few crates per level. The upper level is unreachable for ground agents.
GroundTruthWorld generateMultiLevel(const MultiLevelConfig& config);

/// Simulates one scan of `sensor` from `pose` against the ground truth.
/// Rays raster the FOV uniformly (pixel-center spacing), rotated by the pose
/// yaw. A ray terminates on the first occupied voxel within maxRange
/// (endpoint just inside that voxel, hit = true) or at maxRange (hit =
/// false). Deterministic. Throws std::invalid_argument when the pose is out
/// of bounds or inside an occupied voxel.
std::vector<RayMeasurement> simulateScan(const GroundTruthWorld& world,
                                         const SensorModel& sensor,
                                         const Viewpoint& pose);

/// First collision-free ground pose (plane of the agent's sensor height) and
/// first fully free coarse block center for the aerial agent, in
/// deterministic scan order. Throws when no valid pose exists.
Viewpoint autoGroundStart(const GroundTruthWorld& world, const AgentSpec& agent);
Viewpoint autoAerialStart(const GroundTruthWorld& world, const AgentSpec& agent);

}  // namespace tandem
