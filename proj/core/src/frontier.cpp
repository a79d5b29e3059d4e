#include "tandem/frontier.hpp"

#include <algorithm>

namespace tandem {

namespace {

constexpr int kNeighborOffsets[6][3] = {{1, 0, 0},  {-1, 0, 0}, {0, 1, 0},
                                        {0, -1, 0}, {0, 0, 1},  {0, 0, -1}};

}  // namespace

bool isFrontier(const OccupancyMap& map, const VoxelKey& key) {
  const GridGeometry& g = map.geometry();
  if (map.state(key) != OccupancyState::Unknown) return false;
  for (const auto& d : kNeighborOffsets) {
    const VoxelKey n{key.ix + d[0], key.iy + d[1], key.iz + d[2]};
    if (g.inBounds(n) && map.state(n) == OccupancyState::Free) return true;
  }
  return false;
}

std::set<VoxelKey> batchFrontiers(const OccupancyMap& map) {
  const GridGeometry& g = map.geometry();
  std::set<VoxelKey> result;
  for (int iz = 0; iz < g.nz; ++iz) {
    for (int iy = 0; iy < g.ny; ++iy) {
      for (int ix = 0; ix < g.nx; ++ix) {
        const VoxelKey key{ix, iy, iz};
        if (isFrontier(map, key)) result.insert(result.end(), key);
      }
    }
  }
  return result;
}

std::set<VoxelKey> updateFrontiers(std::set<VoxelKey> frontiers, const OccupancyMap& map,
                                   std::span<const VoxelKey> changed,
                                   std::size_t* visited) {
  const GridGeometry& g = map.geometry();
  // Frontier status depends only on a voxel's own state and its 6-neighbors',
  // so only the changed voxels and their neighborhoods can flip.
  std::vector<VoxelKey> candidates;
  candidates.reserve(changed.size() * 7);
  for (const VoxelKey& key : changed) {
    candidates.push_back(key);
    for (const auto& d : kNeighborOffsets) {
      const VoxelKey n{key.ix + d[0], key.iy + d[1], key.iz + d[2]};
      if (g.inBounds(n)) candidates.push_back(n);
    }
  }
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
  if (visited) *visited = candidates.size();

  for (const VoxelKey& key : candidates) {
    if (isFrontier(map, key)) {
      frontiers.insert(key);
    } else {
      frontiers.erase(key);
    }
  }
  return frontiers;
}

}  // namespace tandem
