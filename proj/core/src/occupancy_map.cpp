#include "tandem/occupancy_map.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>
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

void writeF32(std::ostream& out, float v) {
  std::uint32_t bits;
  std::memcpy(&bits, &v, 4);
  writeU32(out, bits);
}

float readF32(std::istream& in) {
  const std::uint32_t bits = readU32(in);
  float v;
  std::memcpy(&v, &bits, 4);
  return v;
}

}  // namespace

OccupancyMap::OccupancyMap(const Box3& bounds, double resolution, LogOddsParams params)
    : OccupancyMap(GridGeometry::fromBounds(bounds, resolution), params) {}

OccupancyMap::OccupancyMap(GridGeometry geom, LogOddsParams params)
    : geom_(geom),
      params_(params),
      logOdds_(geom_.voxelCount(), 0.0f),
      state_(geom_.voxelCount(), static_cast<std::uint8_t>(OccupancyState::Unknown)),
      missCount_(geom_.voxelCount(), 0),
      hitCount_(geom_.voxelCount(), 0) {}

OccupancyState OccupancyMap::classify(std::size_t idx) const {
  if (state_[idx] == static_cast<std::uint8_t>(OccupancyState::Unknown)) {
    return OccupancyState::Unknown;
  }
  return logOdds_[idx] > params_.occupiedThreshold ? OccupancyState::Occupied
                                                   : OccupancyState::Free;
}

std::vector<VoxelKey> OccupancyMap::integrateScan(const Vec3& origin,
                                                  std::span<const RayMeasurement> scan) {
  if (!geom_.inBounds(origin)) {
    throw std::invalid_argument("integrateScan: origin out of bounds");
  }
  const Box3 bounds = geom_.bounds();
  const double eps = geom_.resolution * 1e-9;

  for (const RayMeasurement& ray : scan) {
    Vec3 end = ray.endpoint;
    bool hit = ray.hit;
    if (!geom_.inBounds(end)) {
      // Clip at the boundary; whatever lies beyond is unobserved.
      const auto clipped = clipSegmentToBox(bounds, origin, end);
      if (!clipped) continue;
      end = origin + clipped->second * (end - origin);
      for (int axis = 0; axis < 3; ++axis) {
        end[axis] = std::clamp(end[axis], bounds.min()[axis] + eps,
                               bounds.max()[axis] - eps);
      }
      hit = false;
    }
    const VoxelKey endKey = geom_.keyOf(end);
    traverseSegment(geom_, origin, end, [&](const VoxelKey& key, double, double) {
      const std::size_t idx = geom_.linearIndex(key);
      if (missCount_[idx] == 0 && hitCount_[idx] == 0) touched_.push_back(idx);
      if (hit && key == endKey) {
        ++hitCount_[idx];
      } else {
        ++missCount_[idx];
      }
      return true;
    });
  }

  std::vector<VoxelKey> changed;
  applyCounts(&changed);
  return changed;
}

void OccupancyMap::applyCounts(std::vector<VoxelKey>* changed) {
  std::sort(touched_.begin(), touched_.end());
  const float lo = static_cast<float>(params_.clampMin);
  const float hi = static_cast<float>(params_.clampMax);
  for (const std::size_t idx : touched_) {
    const OccupancyState before = classify(idx);
    // Same-sign increments commute with the clamp, so applying all misses
    // then all hits reproduces any per-ray order with misses first.
    float l = logOdds_[idx];
    if (missCount_[idx] > 0) {
      l = std::clamp(l + static_cast<float>(missCount_[idx] * params_.miss), lo, hi);
    }
    if (hitCount_[idx] > 0) {
      l = std::clamp(l + static_cast<float>(hitCount_[idx] * params_.hit), lo, hi);
    }
    logOdds_[idx] = l;
    missCount_[idx] = 0;
    hitCount_[idx] = 0;
    state_[idx] = static_cast<std::uint8_t>(l > params_.occupiedThreshold
                                                ? OccupancyState::Occupied
                                                : OccupancyState::Free);
    if (classify(idx) != before) changed->push_back(geom_.keyFromLinear(idx));
  }
  touched_.clear();
  std::sort(changed->begin(), changed->end());
}

OccupancyState OccupancyMap::state(const VoxelKey& key) const {
  if (!geom_.inBounds(key)) {
    throw std::out_of_range("state: key out of bounds");
  }
  return static_cast<OccupancyState>(state_[geom_.linearIndex(key)]);
}

OccupancyState OccupancyMap::stateAt(const Vec3& point) const {
  if (!geom_.inBounds(point)) {
    throw std::out_of_range("stateAt: point out of bounds");
  }
  return static_cast<OccupancyState>(state_[geom_.linearIndex(geom_.keyOf(point))]);
}

double OccupancyMap::logOdds(const VoxelKey& key) const {
  if (!geom_.inBounds(key)) {
    throw std::out_of_range("logOdds: key out of bounds");
  }
  return logOdds_[geom_.linearIndex(key)];
}

bool OccupancyMap::rayCast(const Vec3& from, const Vec3& to) const {
  if (!geom_.inBounds(from) || !geom_.inBounds(to)) {
    throw std::invalid_argument("rayCast: endpoint out of bounds");
  }
  // Canonical endpoint order makes the traversal (and thus any tie-breaking
  // at corner crossings) symmetric in the arguments.
  const bool swap = std::make_tuple(to.x(), to.y(), to.z()) <
                    std::make_tuple(from.x(), from.y(), from.z());
  const Vec3& a = swap ? to : from;
  const Vec3& b = swap ? from : to;

  const VoxelKey aKey = geom_.keyOf(a);
  const VoxelKey bKey = geom_.keyOf(b);
  bool blocked = false;
  traverseSegment(geom_, a, b, [&](const VoxelKey& key, double, double) {
    if (key == aKey || key == bKey) return true;
    if (static_cast<OccupancyState>(state_[geom_.linearIndex(key)]) !=
        OccupancyState::Free) {
      blocked = true;
      return false;
    }
    return true;
  });
  return !blocked;
}

std::vector<VoxelKey> OccupancyMap::coarseFreeVoxels(int factor) const {
  if (factor < 1 || (factor & (factor - 1)) != 0) {
    throw std::invalid_argument("coarseFreeVoxels: factor must be a power of two >= 1");
  }
  std::vector<VoxelKey> blocks;
  const int bx = geom_.nx / factor;
  const int by = geom_.ny / factor;
  const int bz = geom_.nz / factor;
  for (int kz = 0; kz < bz; ++kz) {
    for (int ky = 0; ky < by; ++ky) {
      for (int kx = 0; kx < bx; ++kx) {
        bool allFree = true;
        for (int dz = 0; dz < factor && allFree; ++dz) {
          for (int dy = 0; dy < factor && allFree; ++dy) {
            const std::size_t row = geom_.linearIndex(
                VoxelKey{kx * factor, ky * factor + dy, kz * factor + dz});
            for (int dx = 0; dx < factor; ++dx) {
              if (state_[row + dx] != static_cast<std::uint8_t>(OccupancyState::Free)) {
                allFree = false;
                break;
              }
            }
          }
        }
        if (allFree) blocks.push_back(VoxelKey{kx, ky, kz});
      }
    }
  }
  std::sort(blocks.begin(), blocks.end());
  return blocks;
}

CoverageStats OccupancyMap::coverageStats() const {
  std::size_t counts[3] = {0, 0, 0};
  for (const std::uint8_t s : state_) ++counts[s];
  const double total = static_cast<double>(state_.size());
  return CoverageStats{counts[0] / total, counts[1] / total, counts[2] / total};
}

std::vector<VoxelKey> OccupancyMap::markFreeBox(const Box3& region) {
  const double eps = geom_.resolution * 1e-9;
  std::vector<VoxelKey> changed;
  const auto loKey = geom_.keyOf(region.min() + Vec3::Constant(eps));
  const auto hiKey = geom_.keyOf(region.max() - Vec3::Constant(eps));
  for (int iz = std::max(0, loKey.iz); iz <= std::min(geom_.nz - 1, hiKey.iz); ++iz) {
    for (int iy = std::max(0, loKey.iy); iy <= std::min(geom_.ny - 1, hiKey.iy); ++iy) {
      for (int ix = std::max(0, loKey.ix); ix <= std::min(geom_.nx - 1, hiKey.ix); ++ix) {
        const std::size_t idx = geom_.linearIndex(VoxelKey{ix, iy, iz});
        if (missCount_[idx] == 0 && hitCount_[idx] == 0) touched_.push_back(idx);
        ++missCount_[idx];
      }
    }
  }
  applyCounts(&changed);
  return changed;
}

void OccupancyMap::writeTriState(std::ostream& out) const {
  out.write(kMagic, 4);
  out.put(static_cast<char>(kVersion));
  writeU32(out, static_cast<std::uint32_t>(geom_.nx));
  writeU32(out, static_cast<std::uint32_t>(geom_.ny));
  writeU32(out, static_cast<std::uint32_t>(geom_.nz));
  writeF32(out, static_cast<float>(geom_.resolution));
  out.write(reinterpret_cast<const char*>(state_.data()),
            static_cast<std::streamsize>(state_.size()));
}

void OccupancyMap::saveTriState(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("saveTriState: cannot open " + path.string());
  writeTriState(out);
  if (!out) throw std::runtime_error("saveTriState: write failed for " + path.string());
}

OccupancyMap OccupancyMap::fromTriState(const GridGeometry& geom,
                                        std::span<const std::uint8_t> states,
                                        LogOddsParams params) {
  if (states.size() != geom.voxelCount()) {
    throw std::invalid_argument("fromTriState: state count does not match geometry");
  }
  OccupancyMap map(geom, params);
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (states[i] > 2) throw std::invalid_argument("fromTriState: invalid state byte");
    map.state_[i] = states[i];
    switch (static_cast<OccupancyState>(states[i])) {
      case OccupancyState::Free:
        map.logOdds_[i] = static_cast<float>(params.miss);
        break;
      case OccupancyState::Occupied:
        map.logOdds_[i] = static_cast<float>(params.hit);
        break;
      case OccupancyState::Unknown:
        map.logOdds_[i] = 0.0f;
        break;
    }
  }
  return map;
}

OccupancyMap OccupancyMap::loadTriState(const std::filesystem::path& path,
                                        LogOddsParams params) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("loadTriState: cannot open " + path.string());
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0) {
    throw std::runtime_error("loadTriState: bad magic");
  }
  if (in.get() != kVersion) throw std::runtime_error("loadTriState: bad version");
  GridGeometry geom;
  geom.nx = static_cast<int>(readU32(in));
  geom.ny = static_cast<int>(readU32(in));
  geom.nz = static_cast<int>(readU32(in));
  geom.resolution = static_cast<double>(readF32(in));
  if (!in || geom.nx <= 0 || geom.ny <= 0 || geom.nz <= 0 || geom.resolution <= 0.0) {
    throw std::runtime_error("loadTriState: bad header");
  }
  std::vector<std::uint8_t> states(geom.voxelCount());
  in.read(reinterpret_cast<char*>(states.data()),
          static_cast<std::streamsize>(states.size()));
  if (!in) throw std::runtime_error("loadTriState: truncated payload");
  return fromTriState(geom, states, params);
}

}  // namespace tandem
