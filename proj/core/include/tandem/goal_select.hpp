#pragma once

#include "tandem/corridor.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <set>
#include <vector>

namespace tandem {

/// Sampled information gain per ground-corridor cell. gain[i] counts the
/// sampled frontiers visible from cells[i]; 0 <= gain[i] <= samplesPerCell.
struct ViewQualityImage {
  std::vector<VoxelKey> cells;
  std::vector<int> gain;
  int samplesPerCell = 0;
  std::uint64_t seed = 0;
  GridGeometry mapGeometry;
  double sensorHeight = 0.0;

  bool empty() const { return cells.empty(); }
  Vec3 cellCenter(std::size_t i) const {
    Vec3 c = mapGeometry.centerOf(cells[i]);
    c.z() = sensorHeight;
    return c;
  }
};

/// Monte-Carlo view-quality rendering over the ground corridor: per cell,
/// frontiers are drawn uniformly (with replacement, duplicates not
/// re-counted) and kept while inside the cell's sensor feasible region,
/// until raysPerVoxel are kept or 20 * raysPerVoxel draws were spent; when
/// raysPerVoxel covers the whole frontier set the sampler enumerates it
/// instead. The gain is the number of kept frontiers an unobstructed ray
/// reaches. Per-cell RNG streams derive from (seed, cell index), so the
/// image is identical for every thread count.
ViewQualityImage renderViewQuality(const Corridor& corridor,
                                   const std::vector<VoxelKey>& frontiers,
                                   const OccupancyMap& map, int raysPerVoxel,
                                   std::uint64_t seed, int threads = 1);

/// Debug dump, one "x,y,z,ig" row per cell.
void writeViewQualityCsv(const ViewQualityImage& image, std::ostream& out);

/// Picks the corridor cell maximizing exp(-lambda * dist(cell, q0)) * gain.
/// Ties break toward the smaller distance to q0, then the smaller key. Cells
/// in `banned` are skipped. Returns nullopt when no cell has positive gain.
/// The returned viewpoint faces the goal from q0.
std::optional<Viewpoint> selectGroundGoal(const ViewQualityImage& image,
                                          const Viewpoint& q0, double lambda,
                                          const std::set<VoxelKey>& banned = {});

/// Frontiers grouped by aligned clusterFactor^3 blocks.
struct FrontierCluster {
  VoxelKey block;
  Vec3 center = Vec3::Zero();
  std::vector<VoxelKey> members;

  std::size_t count() const { return members.size(); }
};

/// clusterFactor must be a power of two >= 2.
std::vector<FrontierCluster> clusterFrontiers(const std::vector<VoxelKey>& frontiers,
                                              int clusterFactor,
                                              const GridGeometry& geom);

struct AerialGoal {
  Viewpoint pose;
  VoxelKey targetFrontier;
  VoxelKey corridorCell;
  VoxelKey clusterBlock;
};

/// Ranks clusters by exp(-lambda * dist(center, q0)) * count, then walks the
/// best cluster's members in order of distance to the cluster center; the
/// first (member, corridor cell) pair connected by an unobstructed ray with
/// the cell inside the member's feasible region wins. Exhausted clusters
/// fall through to the next-best one. Clusters in `bannedBlocks` are
/// skipped. The goal faces its target frontier.
std::optional<AerialGoal> selectAerialGoal(const std::vector<FrontierCluster>& clusters,
                                           const Corridor& corridor,
                                           const OccupancyMap& map, const Viewpoint& q0,
                                           double lambda,
                                           const std::set<VoxelKey>& bannedBlocks = {});

}  // namespace tandem
