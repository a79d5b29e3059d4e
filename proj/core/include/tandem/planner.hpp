#pragma once

#include "tandem/agent.hpp"
#include "tandem/occupancy_map.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace tandem {

/// Ordered list of viewpoints from the current configuration to a goal.
struct Path {
  std::vector<Viewpoint> viewpoints;

  double length() const;
  bool empty() const { return viewpoints.empty(); }
  std::size_t size() const { return viewpoints.size(); }
};

/// A state is valid iff every voxel intersecting the agent's collision box
/// centered at q is Free (Unknown is invalid, as is a box poking out of the
/// map).
bool isStateValid(const OccupancyMap& map, const AgentSpec& agent, const Viewpoint& q);

struct RrtParams {
  std::uint64_t seed = 1;
  int maxIterations = 5000;
  double goalBias = 0.1;
  /// Extension step; 0 means 2 * map resolution.
  double stepSize = 0.0;
  /// Edge-validity interpolation step; 0 means the map resolution.
  double interpStep = 0.0;
  /// Sampling domain; empty means the full map bounds. Ground agents sample
  /// only x and y (z stays on their plane).
  Box3 samplingBox;
};

/// Plain RRT with goal bias. A straight valid start-goal segment returns the
/// two-point path directly. Every returned waypoint and every interpolated
/// intermediate at the interpolation step is valid. Deterministic per seed.
/// Returns nullopt when no path is found within maxIterations (or when an
/// endpoint state is invalid).
std::optional<Path> planRrt(const OccupancyMap& map, const AgentSpec& agent,
                            const Viewpoint& start, const Viewpoint& goal,
                            const RrtParams& params);

/// Inserts linearly interpolated viewpoints so consecutive positions are at
/// most `spacing` apart. Yaw interpolates along the shortest arc; original
/// waypoints (and thus the endpoints) are preserved bit-identically.
Path densifyPath(const Path& path, double spacing);

}  // namespace tandem
