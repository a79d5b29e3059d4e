#include "tandem/corridor.hpp"

#include "tandem/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <set>

namespace tandem {

namespace {

constexpr int kNeighbor4[4][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
constexpr int kNeighbor6[6][3] = {{1, 0, 0},  {-1, 0, 0}, {0, 1, 0},
                                  {0, -1, 0}, {0, 0, 1},  {0, 0, -1}};

/// Every voxel intersecting the box [center - half, center + half] is Free.
bool boxAllFree(const OccupancyMap& map, const Vec3& center, const Vec3& half) {
  const GridGeometry& g = map.geometry();
  const double eps = g.resolution * 1e-9;
  const VoxelKey lo = g.keyOf(center - half + Vec3::Constant(eps));
  const VoxelKey hi = g.keyOf(center + half - Vec3::Constant(eps));
  if (!g.inBounds(lo) || !g.inBounds(hi)) return false;
  for (int iz = lo.iz; iz <= hi.iz; ++iz) {
    for (int iy = lo.iy; iy <= hi.iy; ++iy) {
      for (int ix = lo.ix; ix <= hi.ix; ++ix) {
        if (map.state(VoxelKey{ix, iy, iz}) != OccupancyState::Free) return false;
      }
    }
  }
  return true;
}

}  // namespace

bool Corridor::contains(const VoxelKey& cell) const {
  return std::binary_search(cells.begin(), cells.end(), cell);
}

Vec3 Corridor::cellCenter(const VoxelKey& cell) const {
  if (coarseFactor == 1) {
    Vec3 c = mapGeometry.centerOf(cell);
    if (agent.motion == MotionType::Ground) c.z() = agent.sensorHeight;
    return c;
  }
  return mapGeometry.origin + mapGeometry.resolution * coarseFactor *
                                  Vec3(cell.ix + 0.5, cell.iy + 0.5, cell.iz + 0.5);
}

Box3 Corridor::boundingBox() const {
  Box3 box;
  for (const VoxelKey& cell : cells) {
    const Vec3 c = cellCenter(cell);
    box.extend(c - Vec3::Constant(cellSize() / 2.0));
    box.extend(c + Vec3::Constant(cellSize() / 2.0));
  }
  return box;
}

int aerialCoarseFactor(double resolution, const Vec3& collisionHalfExtents) {
  const double edge = 2.0 * collisionHalfExtents.maxCoeff();
  int factor = 1;
  while (factor * resolution < edge * (1.0 - 1e-9)) factor <<= 1;
  return factor;
}

Corridor computeGroundCorridor(const OccupancyMap& map, const AgentSpec& agent,
                               const Viewpoint& q0) {
  const GridGeometry& g = map.geometry();
  Corridor corridor;
  corridor.agent = agent;
  corridor.mapGeometry = g;
  corridor.coarseFactor = 1;

  const int layer =
      g.keyOf(Vec3(g.origin.x(), g.origin.y(), agent.sensorHeight)).iz;
  corridor.planeLayer = layer;
  if (layer < 0 || layer >= g.nz) return corridor;

  const auto cellValid = [&](int ix, int iy) {
    Vec3 center = g.centerOf(VoxelKey{ix, iy, layer});
    center.z() = agent.sensorHeight;
    return boxAllFree(map, center, agent.collisionHalfExtents);
  };

  const VoxelKey startKey = g.keyOf(q0.position);
  if (!g.inBounds(startKey) || !cellValid(startKey.ix, startKey.iy)) return corridor;

  std::vector<std::uint8_t> seen(static_cast<std::size_t>(g.nx) * g.ny, 0);
  const auto planeIndex = [&](int ix, int iy) {
    return static_cast<std::size_t>(iy) * g.nx + ix;
  };
  std::deque<std::pair<int, int>> queue{{startKey.ix, startKey.iy}};
  seen[planeIndex(startKey.ix, startKey.iy)] = 1;
  while (!queue.empty()) {
    const auto [ix, iy] = queue.front();
    queue.pop_front();
    corridor.cells.push_back(VoxelKey{ix, iy, layer});
    for (const auto& d : kNeighbor4) {
      const int jx = ix + d[0];
      const int jy = iy + d[1];
      if (jx < 0 || jy < 0 || jx >= g.nx || jy >= g.ny) continue;
      if (seen[planeIndex(jx, jy)]) continue;
      seen[planeIndex(jx, jy)] = 1;
      if (cellValid(jx, jy)) queue.push_back({jx, jy});
    }
  }
  std::sort(corridor.cells.begin(), corridor.cells.end());
  return corridor;
}

Corridor computeAerialCorridor(const OccupancyMap& map, const AgentSpec& agent,
                               const Viewpoint& q0) {
  const GridGeometry& g = map.geometry();
  Corridor corridor;
  corridor.agent = agent;
  corridor.mapGeometry = g;
  corridor.coarseFactor = aerialCoarseFactor(g.resolution, agent.collisionHalfExtents);

  const std::vector<VoxelKey> freeBlocks = map.coarseFreeVoxels(corridor.coarseFactor);
  if (freeBlocks.empty()) return corridor;

  const VoxelKey base = g.keyOf(q0.position);
  const VoxelKey startBlock{base.ix / corridor.coarseFactor,
                            base.iy / corridor.coarseFactor,
                            base.iz / corridor.coarseFactor};
  if (!std::binary_search(freeBlocks.begin(), freeBlocks.end(), startBlock)) {
    return corridor;
  }

  std::set<VoxelKey> remaining(freeBlocks.begin(), freeBlocks.end());
  std::deque<VoxelKey> queue{startBlock};
  remaining.erase(startBlock);
  while (!queue.empty()) {
    const VoxelKey block = queue.front();
    queue.pop_front();
    corridor.cells.push_back(block);
    for (const auto& d : kNeighbor6) {
      const VoxelKey n{block.ix + d[0], block.iy + d[1], block.iz + d[2]};
      const auto it = remaining.find(n);
      if (it != remaining.end()) {
        remaining.erase(it);
        queue.push_back(n);
      }
    }
  }
  std::sort(corridor.cells.begin(), corridor.cells.end());
  return corridor;
}

bool feasibleRegionContains(const AgentSpec& agent, const Vec3& frontier,
                            const Vec3& candidate) {
  const double dmax = agent.sensor.maxRange;
  if (agent.motion == MotionType::Ground) {
    const double dh = frontier.z() - agent.sensorHeight;
    const double r = std::hypot(frontier.x() - candidate.x(), frontier.y() - candidate.y());
    if (r * r + dh * dh > dmax * dmax) return false;
    return std::abs(dh) <= r * std::tan(agent.sensor.fovV / 2.0);
  }
  const Vec3 rel = frontier - candidate;
  if (rel.norm() > dmax) return false;
  const double r = std::hypot(rel.x(), rel.y());
  return std::abs(std::atan2(rel.z(), r)) <= agent.sensor.fovV / 2.0;
}

AgentFrontiers distributeToAgent(const std::vector<VoxelKey>& frontiers,
                                 const Corridor& corridor, const OccupancyMap& map,
                                 int threads) {
  AgentFrontiers result;
  if (corridor.empty() || frontiers.empty()) return result;
  const GridGeometry& g = map.geometry();

  // witness[i] holds the corridor cell proving frontiers[i] assignable, or
  // nullopt. Per-frontier work is independent, so the loop parallelizes.
  std::vector<std::optional<VoxelKey>> witness(frontiers.size());
  parallelFor(threads, frontiers.size(), [&](std::size_t i) {
    const Vec3 fc = g.centerOf(frontiers[i]);
    std::vector<std::pair<double, VoxelKey>> candidates;
    for (const VoxelKey& cell : corridor.cells) {
      const Vec3 cc = corridor.cellCenter(cell);
      if (feasibleRegionContains(corridor.agent, fc, cc)) {
        candidates.emplace_back((cc - fc).squaredNorm(), cell);
      }
    }
    // Nearest-first so the first unobstructed witness ends the scan early.
    std::sort(candidates.begin(), candidates.end());
    for (const auto& [dist2, cell] : candidates) {
      if (map.rayCast(fc, corridor.cellCenter(cell))) {
        witness[i] = cell;
        break;
      }
    }
  });

  for (std::size_t i = 0; i < frontiers.size(); ++i) {
    if (witness[i]) {
      result.frontiers.push_back(frontiers[i]);
      result.witness.emplace(frontiers[i], *witness[i]);
    }
  }
  return result;
}

FrontierPartition distributeFrontiers(const std::vector<VoxelKey>& frontiers,
                                      const Corridor& groundCorridor,
                                      const Corridor& aerialCorridor,
                                      const OccupancyMap& map, int threads) {
  FrontierPartition partition;
  partition.ground = distributeToAgent(frontiers, groundCorridor, map, threads);

  // Ground assignment has priority; the aerial pass sees the remainder only.
  std::vector<VoxelKey> remainder;
  remainder.reserve(frontiers.size() - partition.ground.frontiers.size());
  std::set_difference(frontiers.begin(), frontiers.end(),
                      partition.ground.frontiers.begin(),
                      partition.ground.frontiers.end(), std::back_inserter(remainder));
  partition.aerial = distributeToAgent(remainder, aerialCorridor, map, threads);
  return partition;
}

}  // namespace tandem
