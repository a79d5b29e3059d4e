#include "tandem/yaw_optimizer.hpp"

#include "tandem/parallel.hpp"

#include <algorithm>
#include <cmath>

namespace tandem {

namespace {

double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

struct AngleDecomposition {
  double distance;
  double azimuthOffset;  // yaw-relative, wrapped to (-pi, pi]
  double elevation;
};

AngleDecomposition decompose(const Viewpoint& q, const Vec3& target) {
  const Vec3 rel = target - q.position;
  const double r = std::hypot(rel.x(), rel.y());
  return AngleDecomposition{rel.norm(), wrapToPi(std::atan2(rel.y(), rel.x()) - q.yaw),
                            std::atan2(rel.z(), r)};
}

}  // namespace

int hardVisibleCount(const OccupancyMap& map, const std::vector<VoxelKey>& frontiers,
                     const SensorModel& sensor, const Viewpoint& q) {
  const GridGeometry& g = map.geometry();
  int count = 0;
  for (const VoxelKey& f : frontiers) {
    const Vec3 fc = g.centerOf(f);
    const AngleDecomposition a = decompose(q, fc);
    if (a.distance > sensor.maxRange) continue;
    if (sensor.kind != SensorKind::Lidar360 &&
        std::abs(a.azimuthOffset) > sensor.fovH / 2.0) {
      continue;
    }
    if (std::abs(a.elevation) > sensor.fovV / 2.0) continue;
    if (map.rayCast(q.position, fc)) ++count;
  }
  return count;
}

std::vector<Vec3> occlusionVisibleFrontiers(const OccupancyMap& map,
                                            const std::vector<VoxelKey>& frontiers,
                                            const Vec3& position) {
  const GridGeometry& g = map.geometry();
  std::vector<Vec3> visible;
  for (const VoxelKey& f : frontiers) {
    const Vec3 fc = g.centerOf(f);
    if (map.rayCast(position, fc)) visible.push_back(fc);
  }
  return visible;
}

double softIg(const Viewpoint& q, std::span<const Vec3> visibleSet,
              const SensorModel& sensor, const SoftVisibilityParams& params) {
  double total = 0.0;
  for (const Vec3& target : visibleSet) {
    const AngleDecomposition a = decompose(q, target);
    total += logistic(params.kRange * (sensor.maxRange - a.distance)) *
             logistic(params.kAngle * (sensor.fovH / 2.0 - std::abs(a.azimuthOffset))) *
             logistic(params.kAngle * (sensor.fovV / 2.0 - std::abs(a.elevation)));
  }
  return total;
}

double softIgYawGradient(const Viewpoint& q, std::span<const Vec3> visibleSet,
                         const SensorModel& sensor, const SoftVisibilityParams& params) {
  // Only the azimuth factor depends on yaw: d|dpsi|/dyaw = -sign(dpsi), so
  // each term contributes sigma_d * sigma_el * kAngle * sigma_az' * sign(dpsi).
  double grad = 0.0;
  for (const Vec3& target : visibleSet) {
    const AngleDecomposition a = decompose(q, target);
    if (a.azimuthOffset == 0.0) continue;  // subgradient 0 at the kink
    const double sd = logistic(params.kRange * (sensor.maxRange - a.distance));
    const double sa =
        logistic(params.kAngle * (sensor.fovH / 2.0 - std::abs(a.azimuthOffset)));
    const double se = logistic(params.kAngle * (sensor.fovV / 2.0 - std::abs(a.elevation)));
    const double sign = a.azimuthOffset > 0.0 ? 1.0 : -1.0;
    grad += sd * se * params.kAngle * sa * (1.0 - sa) * sign;
  }
  return grad;
}

PathIg hardPathIg(const OccupancyMap& map, const std::vector<VoxelKey>& frontiers,
                  const SensorModel& sensor, const Path& path) {
  PathIg ig;
  ig.contributions.reserve(path.viewpoints.size());
  for (const Viewpoint& q : path.viewpoints) {
    const double c = hardVisibleCount(map, frontiers, sensor, q);
    ig.contributions.push_back(c);
    ig.value += c;
  }
  return ig;
}

std::size_t uniquePathFrontiers(const OccupancyMap& map,
                                const std::vector<VoxelKey>& frontiers,
                                const SensorModel& sensor, const Path& path) {
  const GridGeometry& g = map.geometry();
  std::size_t unique = 0;
  for (const VoxelKey& f : frontiers) {
    const Vec3 fc = g.centerOf(f);
    for (const Viewpoint& q : path.viewpoints) {
      const AngleDecomposition a = decompose(q, fc);
      if (a.distance > sensor.maxRange) continue;
      if (sensor.kind != SensorKind::Lidar360 &&
          std::abs(a.azimuthOffset) > sensor.fovH / 2.0) {
        continue;
      }
      if (std::abs(a.elevation) > sensor.fovV / 2.0) continue;
      if (map.rayCast(q.position, fc)) {
        ++unique;
        break;
      }
    }
  }
  return unique;
}

YawOptimizeResult optimizePathYaw(const Path& path, const OccupancyMap& map,
                                  const std::vector<VoxelKey>& frontiers,
                                  const AgentSpec& agent,
                                  const SoftVisibilityParams& params, int maxIters,
                                  int threads) {
  YawOptimizeResult result;
  result.path = path;
  result.initialHardIg = hardPathIg(map, frontiers, agent.sensor, path).value;
  if (path.viewpoints.size() <= 2 || frontiers.empty()) {
    result.hardIg = hardPathIg(map, frontiers, agent.sensor, path);
    result.uniqueFrontiersSeen = uniquePathFrontiers(map, frontiers, agent.sensor, path);
    return result;
  }

  // Positions never move, so occlusion is a fixed per-viewpoint mask and the
  // objective is smooth in the yaws (modulo the dead-ahead kink).
  const std::size_t inner = path.viewpoints.size() - 2;
  std::vector<std::vector<Vec3>> visibleSets(inner);
  parallelFor(threads, inner, [&](std::size_t i) {
    visibleSets[i] =
        occlusionVisibleFrontiers(map, frontiers, path.viewpoints[i + 1].position);
  });

  // The objective is separable and multimodal in each yaw (a logistic ridge
  // per frontier with flat tails), so seed each waypoint from a coarse
  // azimuth scan before the ascent; the planned yaw stays when it is already
  // the best candidate. A yaw exactly opposite the frontier mass would
  // otherwise start on a plateau with a vanishing gradient.
  constexpr int kYawSeeds = 16;
  std::vector<double> yaw(inner);
  for (std::size_t i = 0; i < inner; ++i) {
    const Vec3& position = path.viewpoints[i + 1].position;
    double best = path.viewpoints[i + 1].yaw;
    double bestValue = softIg(Viewpoint{position, best}, visibleSets[i], agent.sensor,
                              params);
    for (int k = 0; k < kYawSeeds; ++k) {
      const double candidate = wrapToPi(-kPi + (k + 0.5) * 2.0 * kPi / kYawSeeds);
      const double value =
          softIg(Viewpoint{position, candidate}, visibleSets[i], agent.sensor, params);
      if (value > bestValue) {
        bestValue = value;
        best = candidate;
      }
    }
    yaw[i] = best;
  }

  const auto objective = [&](const std::vector<double>& candidate) {
    double total = 0.0;
    for (std::size_t i = 0; i < inner; ++i) {
      const Viewpoint q{path.viewpoints[i + 1].position, candidate[i]};
      total += softIg(q, visibleSets[i], agent.sensor, params);
    }
    return total;
  };

  double value = objective(yaw);
  std::vector<double> gradient(inner), trial(inner);
  int iter = 0;
  for (; iter < maxIters; ++iter) {
    double norm2 = 0.0;
    for (std::size_t i = 0; i < inner; ++i) {
      const Viewpoint q{path.viewpoints[i + 1].position, yaw[i]};
      gradient[i] = softIgYawGradient(q, visibleSets[i], agent.sensor, params);
      norm2 += gradient[i] * gradient[i];
    }
    if (std::sqrt(norm2) < 1e-6) break;

    // Backtracking line search with the Armijo condition.
    double alpha = 1.0;
    bool accepted = false;
    while (alpha >= 1e-12) {
      for (std::size_t i = 0; i < inner; ++i) {
        trial[i] = wrapToPi(yaw[i] + alpha * gradient[i]);
      }
      const double trialValue = objective(trial);
      if (trialValue >= value + 1e-4 * alpha * norm2) {
        yaw = trial;
        value = trialValue;
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) break;
  }
  result.iterations = iter;

  Path optimized = path;
  for (std::size_t i = 0; i < inner; ++i) optimized.viewpoints[i + 1].yaw = yaw[i];
  PathIg optimizedIg = hardPathIg(map, frontiers, agent.sensor, optimized);

  if (optimizedIg.value < result.initialHardIg) {
    // The smooth surrogate misled the hard count; keep the input.
    result.reverted = true;
    result.hardIg = hardPathIg(map, frontiers, agent.sensor, path);
    result.uniqueFrontiersSeen = uniquePathFrontiers(map, frontiers, agent.sensor, path);
    return result;
  }
  result.uniqueFrontiersSeen =
      uniquePathFrontiers(map, frontiers, agent.sensor, optimized);
  result.path = std::move(optimized);
  result.hardIg = std::move(optimizedIg);
  return result;
}

}  // namespace tandem
