#pragma once

#include "tandem/geometry.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

namespace tandem {

/// Tri-state classification of a voxel. Numeric values match the on-disk
/// tri-state byte encoding (0 = free, 1 = occupied, 2 = unknown).
enum class OccupancyState : std::uint8_t {
  Free = 0,
  Occupied = 1,
  Unknown = 2,
};

/// Log-odds sensor fusion parameters.
struct LogOddsParams {
  double hit = 0.85;
  double miss = -0.4;
  double clampMin = -3.5;
  double clampMax = 3.5;
  double occupiedThreshold = 0.0;
};

/// One range-sensor return: the measured endpoint and whether the ray
/// terminated on a surface (hit) or ran out at max range (miss).
struct RayMeasurement {
  Vec3 endpoint = Vec3::Zero();
  bool hit = false;
};

struct CoverageStats {
  double fractionFree = 0.0;
  double fractionOccupied = 0.0;
  double fractionUnknown = 1.0;
};

/// Bounded probabilistic voxel occupancy map with log-odds updates.
///
/// Every voxel is exactly one of Free / Occupied / Unknown; Unknown means no
/// measurement ever touched it. Scan integration requires exclusive access;
/// all const queries are safe to run concurrently between scans.
class OccupancyMap {
 public:
  OccupancyMap(const Box3& bounds, double resolution, LogOddsParams params = {});

  const GridGeometry& geometry() const { return geom_; }
  double resolution() const { return geom_.resolution; }
  const LogOddsParams& params() const { return params_; }

  /// Integrates one scan taken from `origin`. Voxels traversed by a ray get
  /// miss updates; the endpoint voxel of a hit ray gets a hit update instead.
  /// Miss/hit counts are accumulated per voxel over the whole scan and
  /// applied misses-first, so the result is independent of ray order. Rays
  /// leaving the bounds are clipped at the boundary and treated as non-hit.
  /// Returns the keys whose tri-state classification changed, sorted.
  /// Throws std::invalid_argument when origin is out of bounds.
  std::vector<VoxelKey> integrateScan(const Vec3& origin,
                                      std::span<const RayMeasurement> scan);

  /// Throws std::out_of_range for keys outside the grid.
  OccupancyState state(const VoxelKey& key) const;
  OccupancyState stateAt(const Vec3& point) const;
  double logOdds(const VoxelKey& key) const;

  /// True iff no voxel strictly between the endpoints (the voxels containing
  /// the endpoints are excluded) is Occupied or Unknown. Symmetric in its
  /// arguments. Throws std::invalid_argument for out-of-bounds endpoints.
  bool rayCast(const Vec3& from, const Vec3& to) const;

  /// All aligned factor^3 blocks made entirely of Free voxels, as block keys
  /// (base key / factor). Blocks sticking out past the grid extent are
  /// excluded. factor must be a power of two >= 1; factor 1 returns exactly
  /// the Free voxels.
  std::vector<VoxelKey> coarseFreeVoxels(int factor) const;

  CoverageStats coverageStats() const;

  /// Marks every voxel intersecting `region` as observed free (one miss
  /// update each). Used to seed the space an agent's own body occupies at
  /// startup. Returns the keys whose classification changed, sorted.
  std::vector<VoxelKey> markFreeBox(const Box3& region);

  /// Tri-state export/import in the voxel-world binary format (one byte per
  /// voxel: 0 free, 1 occupied, 2 unknown). Import synthesizes log-odds from
  /// the states.
  void saveTriState(const std::filesystem::path& path) const;
  void writeTriState(std::ostream& out) const;
  static OccupancyMap loadTriState(const std::filesystem::path& path,
                                   LogOddsParams params = {});
  static OccupancyMap fromTriState(const GridGeometry& geom,
                                   std::span<const std::uint8_t> states,
                                   LogOddsParams params = {});

 private:
  OccupancyMap(GridGeometry geom, LogOddsParams params);

  OccupancyState classify(std::size_t idx) const;
  void applyCounts(std::vector<VoxelKey>* changed);

  GridGeometry geom_;
  LogOddsParams params_;
  std::vector<float> logOdds_;
  std::vector<std::uint8_t> state_;
  // Scratch for integrateScan; reset via touched_ after every scan.
  std::vector<std::uint32_t> missCount_;
  std::vector<std::uint32_t> hitCount_;
  std::vector<std::size_t> touched_;
};

}  // namespace tandem
