#include "tandem/planner.hpp"

#include "tandem/rng.hpp"

#include <algorithm>
#include <cmath>

namespace tandem {

double Path::length() const {
  double total = 0.0;
  for (std::size_t i = 1; i < viewpoints.size(); ++i) {
    total += (viewpoints[i].position - viewpoints[i - 1].position).norm();
  }
  return total;
}

namespace {

bool boxStateValid(const OccupancyMap& map, const Vec3& center, const Vec3& half) {
  const GridGeometry& g = map.geometry();
  const double eps = g.resolution * 1e-9;
  const VoxelKey loKey = g.keyOf(center - half + Vec3::Constant(eps));
  const VoxelKey hiKey = g.keyOf(center + half - Vec3::Constant(eps));
  if (!g.inBounds(loKey) || !g.inBounds(hiKey)) return false;
  for (int iz = loKey.iz; iz <= hiKey.iz; ++iz) {
    for (int iy = loKey.iy; iy <= hiKey.iy; ++iy) {
      for (int ix = loKey.ix; ix <= hiKey.ix; ++ix) {
        if (map.state(VoxelKey{ix, iy, iz}) != OccupancyState::Free) return false;
      }
    }
  }
  return true;
}

/// Samples the segment at `step` spacing with the box inflated per axis by
/// half the per-axis displacement between samples; the inflated samples
/// cover the swept volume, so every point of the segment is valid under the
/// exact box.
bool edgeValid(const OccupancyMap& map, const AgentSpec& agent, const Vec3& a,
               const Vec3& b, double step) {
  const double len = (b - a).norm();
  const int n = std::max(1, static_cast<int>(std::ceil(len / step)));
  const Vec3 inflated =
      agent.collisionHalfExtents + (b - a).cwiseAbs() / (2.0 * n);
  for (int i = 0; i <= n; ++i) {
    const Vec3 p = a + (static_cast<double>(i) / n) * (b - a);
    if (!boxStateValid(map, p, inflated)) return false;
  }
  return true;
}

}  // namespace

bool isStateValid(const OccupancyMap& map, const AgentSpec& agent, const Viewpoint& q) {
  return boxStateValid(map, q.position, agent.collisionHalfExtents);
}

std::optional<Path> planRrt(const OccupancyMap& map, const AgentSpec& agent,
                            const Viewpoint& start, const Viewpoint& goal,
                            const RrtParams& params) {
  if (!isStateValid(map, agent, start) || !isStateValid(map, agent, goal)) {
    return std::nullopt;
  }
  const double step =
      params.stepSize > 0.0 ? params.stepSize : 2.0 * map.resolution();
  const double interp =
      params.interpStep > 0.0 ? params.interpStep : map.resolution();
  const bool ground = agent.motion == MotionType::Ground;

  const auto finishPath = [&](std::vector<Vec3> positions) {
    Path path;
    path.viewpoints.reserve(positions.size());
    for (std::size_t i = 0; i < positions.size(); ++i) {
      Viewpoint vp{positions[i], 0.0};
      if (i == 0) {
        vp.yaw = start.yaw;
      } else if (i + 1 == positions.size()) {
        vp.yaw = goal.yaw;
      } else {
        const Vec3 d = positions[i] - positions[i - 1];
        vp.yaw = std::atan2(d.y(), d.x());
      }
      path.viewpoints.push_back(vp);
    }
    return path;
  };

  // Greedy first extension straight at the goal.
  if (edgeValid(map, agent, start.position, goal.position, interp)) {
    return finishPath({start.position, goal.position});
  }

  Box3 domain = params.samplingBox.isEmpty() ? map.geometry().bounds() : params.samplingBox;
  domain.extend(start.position);
  domain.extend(goal.position);

  std::vector<Vec3> nodes{start.position};
  std::vector<int> parent{-1};
  Rng rng(params.seed);

  for (int iter = 0; iter < params.maxIterations; ++iter) {
    Vec3 sample;
    if (rng.uniform01() < params.goalBias) {
      sample = goal.position;
    } else {
      sample.x() = rng.uniform(domain.min().x(), domain.max().x());
      sample.y() = rng.uniform(domain.min().y(), domain.max().y());
      sample.z() = ground ? start.position.z()
                          : rng.uniform(domain.min().z(), domain.max().z());
    }

    std::size_t nearest = 0;
    double nearestDist2 = (nodes[0] - sample).squaredNorm();
    for (std::size_t i = 1; i < nodes.size(); ++i) {
      const double d2 = (nodes[i] - sample).squaredNorm();
      if (d2 < nearestDist2) {
        nearestDist2 = d2;
        nearest = i;
      }
    }
    const Vec3 from = nodes[nearest];
    const double dist = std::sqrt(nearestDist2);
    if (dist < 1e-9) continue;
    const Vec3 to = from + std::min(1.0, step / dist) * (sample - from);
    if (!isStateValid(map, agent, Viewpoint{to, 0.0})) continue;
    if (!edgeValid(map, agent, from, to, interp)) continue;

    nodes.push_back(to);
    parent.push_back(static_cast<int>(nearest));

    if ((to - goal.position).norm() <= step &&
        edgeValid(map, agent, to, goal.position, interp)) {
      std::vector<Vec3> positions{goal.position};
      for (int i = static_cast<int>(nodes.size()) - 1; i >= 0; i = parent[i]) {
        positions.push_back(nodes[i]);
      }
      std::reverse(positions.begin(), positions.end());
      return finishPath(std::move(positions));
    }
  }
  return std::nullopt;
}

Path densifyPath(const Path& path, double spacing) {
  if (!(spacing > 0.0)) {
    throw std::invalid_argument("densifyPath: spacing must be positive");
  }
  if (path.viewpoints.size() < 2) return path;
  Path dense;
  dense.viewpoints.push_back(path.viewpoints.front());
  for (std::size_t i = 1; i < path.viewpoints.size(); ++i) {
    const Viewpoint& a = path.viewpoints[i - 1];
    const Viewpoint& b = path.viewpoints[i];
    const double len = (b.position - a.position).norm();
    const int n = std::max(1, static_cast<int>(std::ceil(len / spacing - 1e-12)));
    for (int k = 1; k < n; ++k) {
      const double t = static_cast<double>(k) / n;
      dense.viewpoints.push_back(Viewpoint{a.position + t * (b.position - a.position),
                                           interpolateYaw(a.yaw, b.yaw, t)});
    }
    dense.viewpoints.push_back(b);
  }
  return dense;
}

}  // namespace tandem
