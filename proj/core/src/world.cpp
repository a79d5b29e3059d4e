#include "tandem/world.hpp"

#include "tandem/corridor.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <numeric>
#include <ostream>

namespace tandem {

namespace {

constexpr char kMagic[4] = {'V', 'O', 'X', 'W'};
constexpr std::uint8_t kVersion = 0x01;

void writeU32(std::ostream& out, std::uint32_t v) {
  const std::uint8_t bytes[4] = {static_cast<std::uint8_t>(v),
                                 static_cast<std::uint8_t>(v >> 8),
                                 static_cast<std::uint8_t>(v >> 16),
                                 static_cast<std::uint8_t>(v >> 24)};
  out.write(reinterpret_cast<const char*>(bytes), 4);
}

std::uint32_t readU32(std::istream& in) {
  std::uint8_t bytes[4];
  in.read(reinterpret_cast<char*>(bytes), 4);
  return static_cast<std::uint32_t>(bytes[0]) | (static_cast<std::uint32_t>(bytes[1]) << 8) |
         (static_cast<std::uint32_t>(bytes[2]) << 16) |
         (static_cast<std::uint32_t>(bytes[3]) << 24);
}

}  // namespace

GroundTruthWorld::GroundTruthWorld(int nx, int ny, int nz, double resolution) {
  if (nx < 1 || ny < 1 || nz < 1 || resolution <= 0.0) {
    throw std::invalid_argument("GroundTruthWorld: degenerate dimensions");
  }
  geom_.origin = Vec3::Zero();
  geom_.resolution = resolution;
  geom_.nx = nx;
  geom_.ny = ny;
  geom_.nz = nz;
  occupied_.assign(geom_.voxelCount(), 0);
}

void GroundTruthWorld::closeShell() {
  for (int iz = 0; iz < geom_.nz; ++iz) {
    for (int iy = 0; iy < geom_.ny; ++iy) {
      for (int ix = 0; ix < geom_.nx; ++ix) {
        if (ix == 0 || iy == 0 || iz == 0 || ix == geom_.nx - 1 || iy == geom_.ny - 1 ||
            iz == geom_.nz - 1) {
          setOccupied(VoxelKey{ix, iy, iz}, true);
        }
      }
    }
  }
}

std::size_t GroundTruthWorld::occupiedCount() const {
  return static_cast<std::size_t>(
      std::count(occupied_.begin(), occupied_.end(), std::uint8_t{1}));
}

void GroundTruthWorld::write(std::ostream& out) const {
  out.write(kMagic, 4);
  out.put(static_cast<char>(kVersion));
  writeU32(out, static_cast<std::uint32_t>(geom_.nx));
  writeU32(out, static_cast<std::uint32_t>(geom_.ny));
  writeU32(out, static_cast<std::uint32_t>(geom_.nz));
  float res = static_cast<float>(geom_.resolution);
  std::uint32_t bits;
  std::memcpy(&bits, &res, 4);
  writeU32(out, bits);
  out.write(reinterpret_cast<const char*>(occupied_.data()),
            static_cast<std::streamsize>(occupied_.size()));
}

void GroundTruthWorld::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("world save: cannot open " + path.string());
  write(out);
  if (!out) throw std::runtime_error("world save: write failed for " + path.string());
}

GroundTruthWorld GroundTruthWorld::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("world load: cannot open " + path.string());
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0) {
    throw std::runtime_error("world load: bad magic");
  }
  if (in.get() != kVersion) throw std::runtime_error("world load: bad version");
  const int nx = static_cast<int>(readU32(in));
  const int ny = static_cast<int>(readU32(in));
  const int nz = static_cast<int>(readU32(in));
  const std::uint32_t bits = readU32(in);
  float res;
  std::memcpy(&res, &bits, 4);
  if (!in || nx <= 0 || ny <= 0 || nz <= 0 || !(res > 0.0f)) {
    throw std::runtime_error("world load: bad header");
  }
  GroundTruthWorld world(nx, ny, nz, static_cast<double>(res));
  in.read(reinterpret_cast<char*>(world.occupied_.data()),
          static_cast<std::streamsize>(world.occupied_.size()));
  if (!in) throw std::runtime_error("world load: truncated payload");
  for (const std::uint8_t b : world.occupied_) {
    if (b > 1) throw std::runtime_error("world load: invalid occupancy byte");
  }
  return world;
}

std::vector<RayMeasurement> simulateScan(const GroundTruthWorld& world,
                                         const SensorModel& sensor,
                                         const Viewpoint& pose) {
  const GridGeometry& g = world.geometry();
  if (!g.inBounds(pose.position)) {
    throw std::invalid_argument("simulateScan: pose out of bounds");
  }
  if (world.occupied(g.keyOf(pose.position))) {
    throw std::invalid_argument("simulateScan: pose inside occupied voxel");
  }

  const Box3 bounds = g.bounds();
  const double eps = g.resolution * 1e-9;
  std::vector<RayMeasurement> scan;
  scan.reserve(static_cast<std::size_t>(sensor.raysH) * sensor.raysV);

  for (int iv = 0; iv < sensor.raysV; ++iv) {
    const double phi = -sensor.fovV / 2.0 + (iv + 0.5) * sensor.fovV / sensor.raysV;
    for (int ih = 0; ih < sensor.raysH; ++ih) {
      const double psi = sensor.kind == SensorKind::Lidar360
                             ? ih * 2.0 * kPi / sensor.raysH
                             : -sensor.fovH / 2.0 + (ih + 0.5) * sensor.fovH / sensor.raysH;
      const double az = pose.yaw + psi;
      const Vec3 dir(std::cos(phi) * std::cos(az), std::cos(phi) * std::sin(az),
                     std::sin(phi));

      Vec3 end = pose.position + sensor.maxRange * dir;
      double segLen = sensor.maxRange;
      if (!g.inBounds(end)) {
        const auto clipped = clipSegmentToBox(bounds, pose.position, end);
        double t1 = clipped ? clipped->second : 0.0;
        end = pose.position + t1 * sensor.maxRange * dir;
        for (int axis = 0; axis < 3; ++axis) {
          end[axis] = std::clamp(end[axis], bounds.min()[axis] + eps,
                                 bounds.max()[axis] - eps);
        }
        segLen = (end - pose.position).norm();
      }

      RayMeasurement m{end, false};
      traverseSegment(g, pose.position, end,
                      [&](const VoxelKey& key, double t0, double t1) {
                        if (!world.occupied(key)) return true;
                        // Land the endpoint strictly inside the occupied
                        // voxel: half a chord past the boundary, then clamp
                        // into the voxel box. Without the clamp, a grazing
                        // ray's endpoint can round into the free neighbor
                        // and register a phantom hit there.
                        const double chord = std::min(t1 - t0, g.resolution / segLen);
                        const double t = t0 + 0.5 * std::max(chord, 0.0);
                        Vec3 endpoint = pose.position + t * segLen * dir;
                        const Box3 box = g.voxelBox(key);
                        for (int axis = 0; axis < 3; ++axis) {
                          endpoint[axis] = std::clamp(endpoint[axis],
                                                      box.min()[axis] + eps,
                                                      box.max()[axis] - eps);
                        }
                        m.endpoint = endpoint;
                        m.hit = true;
                        return false;
                      });
      scan.push_back(m);
    }
  }
  return scan;
}

namespace {

bool groundTruthBoxFree(const GroundTruthWorld& world, const Vec3& center,
                        const Vec3& halfExtents) {
  const GridGeometry& g = world.geometry();
  const double eps = g.resolution * 1e-9;
  const Vec3 lo = center - halfExtents;
  const Vec3 hi = center + halfExtents;
  const VoxelKey loKey = g.keyOf(lo + Vec3::Constant(eps));
  const VoxelKey hiKey = g.keyOf(hi - Vec3::Constant(eps));
  if (!g.inBounds(loKey) || !g.inBounds(hiKey)) return false;
  for (int iz = loKey.iz; iz <= hiKey.iz; ++iz) {
    for (int iy = loKey.iy; iy <= hiKey.iy; ++iy) {
      for (int ix = loKey.ix; ix <= hiKey.ix; ++ix) {
        if (world.occupied(VoxelKey{ix, iy, iz})) return false;
      }
    }
  }
  return true;
}

}  // namespace

Viewpoint autoGroundStart(const GroundTruthWorld& world, const AgentSpec& agent) {
  const GridGeometry& g = world.geometry();
  const int layer = g.keyOf(Vec3(g.origin.x(), g.origin.y(), agent.sensorHeight)).iz;
  if (layer < 0 || layer >= g.nz) {
    throw std::runtime_error("autoGroundStart: sensor height outside world");
  }
  for (int iy = 0; iy < g.ny; ++iy) {
    for (int ix = 0; ix < g.nx; ++ix) {
      Vec3 center = g.centerOf(VoxelKey{ix, iy, layer});
      center.z() = agent.sensorHeight;
      if (groundTruthBoxFree(world, center, agent.collisionHalfExtents)) {
        return Viewpoint{center, 0.0};
      }
    }
  }
  throw std::runtime_error("autoGroundStart: no collision-free ground pose");
}

Viewpoint autoAerialStart(const GroundTruthWorld& world, const AgentSpec& agent) {
  const GridGeometry& g = world.geometry();
  const int factor = aerialCoarseFactor(g.resolution, agent.collisionHalfExtents);
  // Highest block first: starting above the obstacles lets the initial spin
  // reach distant open space over them, which a forward camera can never do
  // for the cone above its own column.
  for (int kz = g.nz / factor - 1; kz >= 0; --kz) {
    for (int ky = 0; ky < g.ny / factor; ++ky) {
      for (int kx = 0; kx < g.nx / factor; ++kx) {
        bool free = true;
        for (int dz = 0; dz < factor && free; ++dz) {
          for (int dy = 0; dy < factor && free; ++dy) {
            for (int dx = 0; dx < factor; ++dx) {
              if (world.occupied(VoxelKey{kx * factor + dx, ky * factor + dy,
                                          kz * factor + dz})) {
                free = false;
                break;
              }
            }
          }
        }
        if (free) {
          const Vec3 center =
              g.origin + g.resolution * factor * Vec3(kx + 0.5, ky + 0.5, kz + 0.5);
          return Viewpoint{center, 0.0};
        }
      }
    }
  }
  throw std::runtime_error("autoAerialStart: no free coarse block");
}

}  // namespace tandem
