#pragma once

#include "tandem/geometry.hpp"
#include "tandem/occupancy_map.hpp"

#include <set>
#include <span>
#include <vector>

namespace tandem {

/// A frontier is an Unknown voxel with at least one face-adjacent Free
/// neighbor (6-connectivity).
bool isFrontier(const OccupancyMap& map, const VoxelKey& key);

/// Exhaustive frontier extraction over the whole grid.
std::set<VoxelKey> batchFrontiers(const OccupancyMap& map);

/// Incremental frontier maintenance. `changed` must be the set returned by
/// the scan integration that produced `map`'s current state, and `frontiers`
/// must have been valid beforehand. Only the changed voxels and their
/// 6-neighborhoods are re-examined; `visited`, when given, receives that
/// count. The result equals batchFrontiers(map).
std::set<VoxelKey> updateFrontiers(std::set<VoxelKey> frontiers, const OccupancyMap& map,
                                   std::span<const VoxelKey> changed,
                                   std::size_t* visited = nullptr);

/// Owning wrapper that keeps a frontier set in sync with a map as scans come
/// in. Mutation is single-threaded; snapshots may be shared read-only.
class FrontierTracker {
 public:
  explicit FrontierTracker(const OccupancyMap& map) : frontiers_(batchFrontiers(map)) {}

  void applyScanChanges(const OccupancyMap& map, std::span<const VoxelKey> changed) {
    frontiers_ = updateFrontiers(std::move(frontiers_), map, changed, &lastVisited_);
  }

  const std::set<VoxelKey>& frontiers() const { return frontiers_; }
  std::vector<VoxelKey> sorted() const {
    return std::vector<VoxelKey>(frontiers_.begin(), frontiers_.end());
  }
  std::size_t size() const { return frontiers_.size(); }
  bool empty() const { return frontiers_.empty(); }
  std::size_t lastVisitCount() const { return lastVisited_; }

 private:
  std::set<VoxelKey> frontiers_;
  std::size_t lastVisited_ = 0;
};

}  // namespace tandem
