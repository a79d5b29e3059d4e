#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>

namespace tandem {

using Vec3 = Eigen::Vector3d;
using Box3 = Eigen::AlignedBox3d;

inline constexpr double kPi = std::numbers::pi;

/// Integer voxel coordinates at the base resolution of a grid.
/// Ordering is lexicographic on (ix, iy, iz).
struct VoxelKey {
  int ix = 0;
  int iy = 0;
  int iz = 0;

  friend bool operator==(const VoxelKey&, const VoxelKey&) = default;
  friend auto operator<=>(const VoxelKey&, const VoxelKey&) = default;
};

/// Wraps an angle to (-pi, pi].
inline double wrapToPi(double angle) {
  double r = std::remainder(angle, 2.0 * kPi);
  if (r <= -kPi) r += 2.0 * kPi;
  return r;
}

/// Shortest-arc interpolation between two yaw angles, t in [0, 1].
inline double interpolateYaw(double from, double to, double t) {
  return wrapToPi(from + t * wrapToPi(to - from));
}

/// Axis-aligned voxel grid frame: origin corner, edge length and dimensions.
/// Voxel (i, j, k) covers the half-open box
/// [origin + (i,j,k)*res, origin + (i+1,j+1,k+1)*res).
struct GridGeometry {
  Vec3 origin = Vec3::Zero();
  double resolution = 0.1;
  int nx = 0;
  int ny = 0;
  int nz = 0;

  /// Dimensions are ceil(extent / resolution) per axis. Throws on
  /// non-positive resolution or bounds smaller than one voxel.
  static GridGeometry fromBounds(const Box3& bounds, double resolution) {
    if (!(resolution > 0.0)) {
      throw std::invalid_argument("GridGeometry: resolution must be positive");
    }
    GridGeometry g;
    g.origin = bounds.min();
    g.resolution = resolution;
    const Vec3 extent = bounds.max() - bounds.min();
    int* dims[3] = {&g.nx, &g.ny, &g.nz};
    for (int axis = 0; axis < 3; ++axis) {
      if (extent[axis] < resolution * (1.0 - 1e-9)) {
        throw std::invalid_argument("GridGeometry: bounds smaller than one voxel");
      }
      *dims[axis] = static_cast<int>(std::ceil(extent[axis] / resolution - 1e-9));
    }
    return g;
  }

  std::size_t voxelCount() const {
    return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny) *
           static_cast<std::size_t>(nz);
  }

  Box3 bounds() const {
    return Box3(origin, origin + resolution * Vec3(nx, ny, nz));
  }

  bool inBounds(const VoxelKey& k) const {
    return k.ix >= 0 && k.ix < nx && k.iy >= 0 && k.iy < ny && k.iz >= 0 && k.iz < nz;
  }

  /// Half-open containment: points on the max faces are out of bounds.
  bool inBounds(const Vec3& p) const {
    const Vec3 hi = origin + resolution * Vec3(nx, ny, nz);
    return p.x() >= origin.x() && p.x() < hi.x() && p.y() >= origin.y() &&
           p.y() < hi.y() && p.z() >= origin.z() && p.z() < hi.z();
  }

  VoxelKey keyOf(const Vec3& p) const {
    return VoxelKey{static_cast<int>(std::floor((p.x() - origin.x()) / resolution)),
                    static_cast<int>(std::floor((p.y() - origin.y()) / resolution)),
                    static_cast<int>(std::floor((p.z() - origin.z()) / resolution))};
  }

  Vec3 centerOf(const VoxelKey& k) const {
    return origin + resolution * Vec3(k.ix + 0.5, k.iy + 0.5, k.iz + 0.5);
  }

  Box3 voxelBox(const VoxelKey& k) const {
    const Vec3 lo = origin + resolution * Vec3(k.ix, k.iy, k.iz);
    return Box3(lo, lo + Vec3::Constant(resolution));
  }

  /// x-fastest, then y, then z (matches the on-disk voxel order).
  std::size_t linearIndex(const VoxelKey& k) const {
    return static_cast<std::size_t>(k.ix) +
           static_cast<std::size_t>(nx) *
               (static_cast<std::size_t>(k.iy) +
                static_cast<std::size_t>(ny) * static_cast<std::size_t>(k.iz));
  }

  VoxelKey keyFromLinear(std::size_t idx) const {
    const std::size_t plane = static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny);
    return VoxelKey{static_cast<int>(idx % static_cast<std::size_t>(nx)),
                    static_cast<int>((idx % plane) / static_cast<std::size_t>(nx)),
                    static_cast<int>(idx / plane)};
  }
};

/// Clips segment a -> b against a box. Returns the clipped parameter interval
/// [t0, t1] within [0, 1], or nullopt when the segment misses the box.
inline std::optional<std::pair<double, double>> clipSegmentToBox(const Box3& box,
                                                                 const Vec3& a,
                                                                 const Vec3& b) {
  double t0 = 0.0;
  double t1 = 1.0;
  const Vec3 d = b - a;
  for (int axis = 0; axis < 3; ++axis) {
    if (d[axis] == 0.0) {
      if (a[axis] < box.min()[axis] || a[axis] > box.max()[axis]) return std::nullopt;
      continue;
    }
    double lo = (box.min()[axis] - a[axis]) / d[axis];
    double hi = (box.max()[axis] - a[axis]) / d[axis];
    if (lo > hi) std::swap(lo, hi);
    t0 = std::max(t0, lo);
    t1 = std::min(t1, hi);
    if (t0 > t1) return std::nullopt;
  }
  return std::make_pair(t0, t1);
}

/// Walks the voxels pierced by segment a -> b, in order, including the voxels
/// containing both endpoints. The visitor receives the voxel key plus the
/// segment-parameter interval [tEnter, tExit] spent inside it and returns
/// false to stop early. Endpoints must map to in-grid voxels.
template <typename Visitor>
void traverseSegment(const GridGeometry& g, const Vec3& a, const Vec3& b, Visitor&& visit) {
  const double inv = 1.0 / g.resolution;
  const Eigen::Vector3d u0 = (a - g.origin) * inv;
  const Eigen::Vector3d u1 = (b - g.origin) * inv;
  const Eigen::Vector3d d = u1 - u0;

  std::array<int, 3> cur{static_cast<int>(std::floor(u0.x())),
                         static_cast<int>(std::floor(u0.y())),
                         static_cast<int>(std::floor(u0.z()))};
  const std::array<int, 3> end{static_cast<int>(std::floor(u1.x())),
                               static_cast<int>(std::floor(u1.y())),
                               static_cast<int>(std::floor(u1.z()))};

  std::array<int, 3> step{};
  std::array<double, 3> tMax{};
  std::array<double, 3> tDelta{};
  constexpr double kInf = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 3; ++i) {
    if (d[i] > 0.0) {
      step[i] = 1;
      tDelta[i] = 1.0 / d[i];
      tMax[i] = (std::floor(u0[i]) + 1.0 - u0[i]) * tDelta[i];
    } else if (d[i] < 0.0) {
      step[i] = -1;
      tDelta[i] = -1.0 / d[i];
      tMax[i] = (u0[i] - std::floor(u0[i])) * tDelta[i];
    } else {
      step[i] = 0;
      tDelta[i] = kInf;
      tMax[i] = kInf;
    }
  }

  long remaining = std::abs(end[0] - cur[0]) + std::abs(end[1] - cur[1]) +
                   std::abs(end[2] - cur[2]) + 3;
  double tEnter = 0.0;
  while (true) {
    const double tExit = std::min({tMax[0], tMax[1], tMax[2], 1.0});
    if (!visit(VoxelKey{cur[0], cur[1], cur[2]}, std::min(tEnter, 1.0), tExit)) return;
    if (cur[0] == end[0] && cur[1] == end[1] && cur[2] == end[2]) return;
    if (--remaining < 0) return;

    int axis = 0;
    if (tMax[1] < tMax[axis]) axis = 1;
    if (tMax[2] < tMax[axis]) axis = 2;
    cur[axis] += step[axis];
    tEnter = tMax[axis];
    tMax[axis] += tDelta[axis];
    if (cur[axis] < 0 || (axis == 0 && cur[0] >= g.nx) || (axis == 1 && cur[1] >= g.ny) ||
        (axis == 2 && cur[2] >= g.nz)) {
      return;
    }
  }
}

}  // namespace tandem
