#include "tandem/goal_select.hpp"

#include "tandem/parallel.hpp"
#include "tandem/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>

namespace tandem {

ViewQualityImage renderViewQuality(const Corridor& corridor,
                                   const std::vector<VoxelKey>& frontiers,
                                   const OccupancyMap& map, int raysPerVoxel,
                                   std::uint64_t seed, int threads) {
  if (raysPerVoxel < 1) {
    throw std::invalid_argument("renderViewQuality: raysPerVoxel must be >= 1");
  }
  const GridGeometry& g = map.geometry();
  ViewQualityImage image;
  image.cells = corridor.cells;
  image.gain.assign(corridor.cells.size(), 0);
  image.samplesPerCell = raysPerVoxel;
  image.seed = seed;
  image.mapGeometry = g;
  image.sensorHeight = corridor.agent.sensorHeight;
  if (frontiers.empty() || corridor.empty()) return image;

  const std::size_t population = frontiers.size();
  const bool enumerateAll = static_cast<std::size_t>(raysPerVoxel) >= population;
  const std::uint64_t attemptCap = 20ULL * static_cast<std::uint64_t>(raysPerVoxel);

  parallelFor(threads, corridor.cells.size(), [&](std::size_t i) {
    const Vec3 sensorPos = corridor.cellCenter(corridor.cells[i]);
    int visible = 0;
    if (enumerateAll) {
      // The sample covers the whole set: rejection sampling degenerates to
      // enumeration, which keeps the estimate exact.
      for (const VoxelKey& f : frontiers) {
        const Vec3 fc = g.centerOf(f);
        if (feasibleRegionContains(corridor.agent, fc, sensorPos) &&
            map.rayCast(sensorPos, fc)) {
          ++visible;
        }
      }
    } else {
      Rng rng(Rng::deriveSeed(seed, g.linearIndex(corridor.cells[i]), 0x7671ULL));
      std::vector<std::uint32_t> kept;
      kept.reserve(static_cast<std::size_t>(raysPerVoxel));
      for (std::uint64_t attempt = 0;
           attempt < attemptCap && kept.size() < static_cast<std::size_t>(raysPerVoxel);
           ++attempt) {
        const std::uint32_t pick = static_cast<std::uint32_t>(rng.uniformInt(population));
        const Vec3 fc = g.centerOf(frontiers[pick]);
        if (!feasibleRegionContains(corridor.agent, fc, sensorPos)) continue;
        if (std::find(kept.begin(), kept.end(), pick) != kept.end()) continue;
        kept.push_back(pick);
        if (map.rayCast(sensorPos, fc)) ++visible;
      }
    }
    image.gain[i] = visible;
  });
  return image;
}

void writeViewQualityCsv(const ViewQualityImage& image, std::ostream& out) {
  out << "x,y,z,ig\n";
  char line[128];
  for (std::size_t i = 0; i < image.cells.size(); ++i) {
    const Vec3 c = image.cellCenter(i);
    std::snprintf(line, sizeof(line), "%.6f,%.6f,%.6f,%d\n", c.x(), c.y(), c.z(),
                  image.gain[i]);
    out << line;
  }
}

std::optional<Viewpoint> selectGroundGoal(const ViewQualityImage& image,
                                          const Viewpoint& q0, double lambda,
                                          const std::set<VoxelKey>& banned) {
  std::optional<std::size_t> best;
  double bestQuality = 0.0;
  double bestDist = 0.0;
  for (std::size_t i = 0; i < image.cells.size(); ++i) {
    if (image.gain[i] <= 0) continue;
    if (banned.contains(image.cells[i])) continue;
    const Vec3 c = image.cellCenter(i);
    const double dist = (c - q0.position).norm();
    const double quality = std::exp(-lambda * dist) * image.gain[i];
    const bool better =
        !best || quality > bestQuality ||
        (quality == bestQuality &&
         (dist < bestDist || (dist == bestDist && image.cells[i] < image.cells[*best])));
    if (better) {
      best = i;
      bestQuality = quality;
      bestDist = dist;
    }
  }
  if (!best) return std::nullopt;
  const Vec3 goal = image.cellCenter(*best);
  const Vec3 d = goal - q0.position;
  const double yaw =
      (std::abs(d.x()) + std::abs(d.y()) > 0.0) ? std::atan2(d.y(), d.x()) : q0.yaw;
  return Viewpoint{goal, yaw};
}

std::vector<FrontierCluster> clusterFrontiers(const std::vector<VoxelKey>& frontiers,
                                              int clusterFactor,
                                              const GridGeometry& geom) {
  if (clusterFactor < 2 || (clusterFactor & (clusterFactor - 1)) != 0) {
    throw std::invalid_argument("clusterFrontiers: factor must be a power of two >= 2");
  }
  std::map<VoxelKey, FrontierCluster> byBlock;
  for (const VoxelKey& f : frontiers) {
    const VoxelKey block{f.ix / clusterFactor, f.iy / clusterFactor, f.iz / clusterFactor};
    FrontierCluster& cluster = byBlock[block];
    cluster.block = block;
    cluster.members.push_back(f);
    cluster.center += geom.centerOf(f);
  }
  std::vector<FrontierCluster> clusters;
  clusters.reserve(byBlock.size());
  for (auto& [block, cluster] : byBlock) {
    cluster.center /= static_cast<double>(cluster.members.size());
    std::sort(cluster.members.begin(), cluster.members.end());
    clusters.push_back(std::move(cluster));
  }
  return clusters;
}

std::optional<AerialGoal> selectAerialGoal(const std::vector<FrontierCluster>& clusters,
                                           const Corridor& corridor,
                                           const OccupancyMap& map, const Viewpoint& q0,
                                           double lambda,
                                           const std::set<VoxelKey>& bannedBlocks) {
  if (corridor.empty()) return std::nullopt;
  const GridGeometry& g = map.geometry();

  std::vector<std::pair<double, std::size_t>> order;
  for (std::size_t i = 0; i < clusters.size(); ++i) {
    if (bannedBlocks.contains(clusters[i].block)) continue;
    const double quality = std::exp(-lambda * (clusters[i].center - q0.position).norm()) *
                           static_cast<double>(clusters[i].count());
    order.emplace_back(-quality, i);
  }
  // Stable: equal qualities fall back to block-key order (clusters arrive
  // sorted by block).
  std::stable_sort(order.begin(), order.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });

  for (const auto& [negQuality, ci] : order) {
    const FrontierCluster& cluster = clusters[ci];
    // Members by distance to the cluster center: the closest is tried first,
    // then the next-closest, until one is visible from the corridor.
    std::vector<std::pair<double, VoxelKey>> members;
    members.reserve(cluster.members.size());
    for (const VoxelKey& m : cluster.members) {
      members.emplace_back((g.centerOf(m) - cluster.center).norm(), m);
    }
    std::sort(members.begin(), members.end());
    for (const auto& [centerDist, member] : members) {
      const Vec3 fc = g.centerOf(member);
      std::vector<std::pair<double, VoxelKey>> candidates;
      for (const VoxelKey& cell : corridor.cells) {
        const Vec3 cc = corridor.cellCenter(cell);
        if (feasibleRegionContains(corridor.agent, fc, cc)) {
          candidates.emplace_back((cc - fc).squaredNorm(), cell);
        }
      }
      std::sort(candidates.begin(), candidates.end());
      for (const auto& [dist2, cell] : candidates) {
        const Vec3 cc = corridor.cellCenter(cell);
        if (!map.rayCast(cc, fc)) continue;
        const Vec3 d = fc - cc;
        const double yaw =
            (std::abs(d.x()) + std::abs(d.y()) > 0.0) ? std::atan2(d.y(), d.x()) : q0.yaw;
        return AerialGoal{Viewpoint{cc, yaw}, member, cell, cluster.block};
      }
    }
  }
  return std::nullopt;
}

}  // namespace tandem
