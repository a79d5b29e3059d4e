#pragma once

#include "tandem/agent.hpp"
#include "tandem/occupancy_map.hpp"
#include "tandem/planner.hpp"

#include <span>
#include <vector>

namespace tandem {

/// Sharpness of the smooth visibility surrogate. As both grow the soft count
/// approaches the hard count.
struct SoftVisibilityParams {
  double kRange = 5.0;   // per meter
  double kAngle = 20.0;  // per radian
};

/// Number of frontier voxels within range, inside the yaw-rotated FOV and
/// reachable by an unobstructed ray from q.
int hardVisibleCount(const OccupancyMap& map, const std::vector<VoxelKey>& frontiers,
                     const SensorModel& sensor, const Viewpoint& q);

/// Frontier centers passing the binary occlusion ray cast from `position`
/// (no range or FOV filtering; those live in the soft factors).
std::vector<Vec3> occlusionVisibleFrontiers(const OccupancyMap& map,
                                            const std::vector<VoxelKey>& frontiers,
                                            const Vec3& position);

/// Smooth visibility count: per frontier, the product of logistic factors in
/// range margin, azimuth margin and elevation margin. Smooth in yaw except
/// for the |azimuth| kink when a frontier is dead ahead.
double softIg(const Viewpoint& q, std::span<const Vec3> visibleSet,
              const SensorModel& sensor, const SoftVisibilityParams& params);

/// Analytic d(softIg)/d(yaw). Takes subgradient 0 at the dead-ahead kink.
double softIgYawGradient(const Viewpoint& q, std::span<const Vec3> visibleSet,
                         const SensorModel& sensor, const SoftVisibilityParams& params);

/// Information gain of a path: the plain sum of per-viewpoint hard counts.
struct PathIg {
  double value = 0.0;
  std::vector<double> contributions;
};

PathIg hardPathIg(const OccupancyMap& map, const std::vector<VoxelKey>& frontiers,
                  const SensorModel& sensor, const Path& path);

/// Distinct frontiers visible from at least one path viewpoint. The path IG
/// sums per-viewpoint counts, so frontiers seen repeatedly count repeatedly
/// there; this is the de-duplicated companion metric.
std::size_t uniquePathFrontiers(const OccupancyMap& map,
                                const std::vector<VoxelKey>& frontiers,
                                const SensorModel& sensor, const Path& path);

struct YawOptimizeResult {
  Path path;
  PathIg hardIg;
  double initialHardIg = 0.0;
  std::size_t uniqueFrontiersSeen = 0;
  int iterations = 0;
  bool reverted = false;
};

/// Gradient ascent with backtracking line search on the summed soft IG of
/// the intermediate viewpoints' yaws. Positions and endpoint yaws are left
/// bit-identical. Per-position occlusion sets are precomputed once (positions
/// are fixed), so the objective is smooth in the decision variables. If the
/// hard count of the result regressed the input path is returned instead, so
/// the reported hard IG never decreases.
YawOptimizeResult optimizePathYaw(const Path& path, const OccupancyMap& map,
                                  const std::vector<VoxelKey>& frontiers,
                                  const AgentSpec& agent,
                                  const SoftVisibilityParams& params,
                                  int maxIters = 100, int threads = 1);

}  // namespace tandem
