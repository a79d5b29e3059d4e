#include "tandem/rng.hpp"
#include "tandem/world.hpp"

#include <algorithm>
#include <stdexcept>
#include <vector>

namespace tandem {

namespace {

// Aerial corridor blocks are 4 base voxels wide at the default resolution
// and collision size; generators keep an aligned free sky band of this width
// above all structures.
constexpr int kSkyBlock = 4;

int heightVoxels(double height, double resolution) {
  return static_cast<int>(std::ceil(height / resolution - 1e-9));
}

void fillBox(GroundTruthWorld& world, int x0, int x1, int y0, int y1, int z0, int z1,
             bool value) {
  for (int iz = z0; iz <= z1; ++iz) {
    for (int iy = y0; iy <= y1; ++iy) {
      for (int ix = x0; ix <= x1; ++ix) {
        world.setOccupied(VoxelKey{ix, iy, iz}, value);
      }
    }
  }
}

}  // namespace

GroundTruthWorld generateMaze(const MazeConfig& config) {
  if (config.cellsX < 2 || config.cellsY < 2) {
    throw std::invalid_argument("generateMaze: needs at least 2x2 cells");
  }
  if (config.corridorVoxels < 3) {
    throw std::invalid_argument("generateMaze: corridor too narrow");
  }

  const int cw = config.corridorVoxels;
  const int pitch = cw + 1;  // corridor plus one wall voxel
  const int patternX = config.cellsX * pitch + 1;
  const int patternY = config.cellsY * pitch + 1;
  const int wallVox = heightVoxels(config.wallHeight, config.resolution);
  const int rimTop = wallVox + 2;
  const int skyBase = ((rimTop + 1 + kSkyBlock - 1) / kSkyBlock) * kSkyBlock;
  const int nz = skyBase + kSkyBlock + 1;

  GroundTruthWorld world(patternX + 2, patternY + 2, nz, config.resolution);
  world.closeShell();

  // Carve a perfect maze with an iterative backtracker.
  const int cellCount = config.cellsX * config.cellsY;
  std::vector<std::uint8_t> visited(cellCount, 0);
  std::vector<std::uint8_t> openEast(cellCount, 0);   // wall to (cx+1, cy)
  std::vector<std::uint8_t> openNorth(cellCount, 0);  // wall to (cx, cy+1)
  const auto cellIndex = [&](int cx, int cy) { return cy * config.cellsX + cx; };

  Rng rng(Rng::deriveSeed(config.seed, 0x6d617a65ULL));
  std::vector<std::pair<int, int>> stack{{0, 0}};
  visited[0] = 1;
  constexpr int kDirs[4][2] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  while (!stack.empty()) {
    const auto [cx, cy] = stack.back();
    int options[4];
    int optionCount = 0;
    for (int d = 0; d < 4; ++d) {
      const int nxCell = cx + kDirs[d][0];
      const int nyCell = cy + kDirs[d][1];
      if (nxCell < 0 || nyCell < 0 || nxCell >= config.cellsX || nyCell >= config.cellsY) {
        continue;
      }
      if (!visited[cellIndex(nxCell, nyCell)]) options[optionCount++] = d;
    }
    if (optionCount == 0) {
      stack.pop_back();
      continue;
    }
    const int d = options[rng.uniformInt(static_cast<std::uint64_t>(optionCount))];
    const int nxCell = cx + kDirs[d][0];
    const int nyCell = cy + kDirs[d][1];
    switch (d) {
      case 0: openEast[cellIndex(cx, cy)] = 1; break;
      case 1: openNorth[cellIndex(cx, cy)] = 1; break;
      case 2: openEast[cellIndex(nxCell, nyCell)] = 1; break;
      case 3: openNorth[cellIndex(nxCell, nyCell)] = 1; break;
    }
    visited[cellIndex(nxCell, nyCell)] = 1;
    stack.push_back({nxCell, nyCell});
  }

  // Voxelize: wall columns rise from the floor to wallVox, except where the
  // maze opened a passage. Pattern coordinate p maps to world index p + 1.
  for (int py = 0; py < patternY; ++py) {
    for (int px = 0; px < patternX; ++px) {
      const bool wallX = px % pitch == 0;
      const bool wallY = py % pitch == 0;
      if (!wallX && !wallY) continue;
      bool open = false;
      if (wallX && !wallY && px > 0 && px < patternX - 1) {
        const int cx = px / pitch - 1;
        const int cy = py / pitch;
        open = openEast[cellIndex(cx, cy)] != 0;
      } else if (wallY && !wallX && py > 0 && py < patternY - 1) {
        const int cx = px / pitch;
        const int cy = py / pitch - 1;
        open = openNorth[cellIndex(cx, cy)] != 0;
      }
      if (!open) {
        fillBox(world, px + 1, px + 1, py + 1, py + 1, 1, wallVox, true);
      }
    }
  }

  // Floor clutter: low boxes against closed walls. Their floor shadows are
  // out of reach of oblique sky views, which is the ground agent's share of
  // the work; the ring sensor at 0.75 m sees over the 0.6 m boxes.
  for (int cy = 0; cy < config.cellsY; ++cy) {
    for (int cx = 0; cx < config.cellsX; ++cx) {
      if (rng.uniform01() >= 0.6) continue;
      const int side = static_cast<int>(rng.uniformInt(4));  // E, N, W, S
      const bool closed =
          side == 0 ? (cx + 1 >= config.cellsX || !openEast[cellIndex(cx, cy)])
          : side == 1 ? (cy + 1 >= config.cellsY || !openNorth[cellIndex(cx, cy)])
          : side == 2 ? (cx == 0 || !openEast[cellIndex(cx - 1, cy)])
                      : (cy == 0 || !openNorth[cellIndex(cx, cy - 1)]);
      if (!closed) continue;
      const int len = 3 + static_cast<int>(rng.uniformInt(2));
      const int along = 1 + static_cast<int>(rng.uniformInt(
                                static_cast<std::uint64_t>(cw - 1 - len)));
      // Cell interior spans world [base + 1, base + cw] per axis.
      const int baseX = 1 + cx * pitch;
      const int baseY = 1 + cy * pitch;
      int x0, x1, y0, y1;
      if (side == 0 || side == 2) {
        x0 = x1 = side == 0 ? baseX + cw : baseX + 1;
        y0 = baseY + 1 + along;
        y1 = y0 + len - 1;
      } else {
        y0 = y1 = side == 1 ? baseY + cw : baseY + 1;
        x0 = baseX + 1 + along;
        x1 = x0 + len - 1;
      }
      fillBox(world, x0, x1, y0, y1, 1, 2, true);
    }
  }

  // Open-top trough on the first closed interior wall segment: a rim two
  // voxels high on top of the wall enclosing a hollow that is visible only
  // from above wall height.
  bool placed = false;
  for (int cx = 0; cx + 1 < config.cellsX && !placed; ++cx) {
    for (int cy = 0; cy < config.cellsY && !placed; ++cy) {
      if (openEast[cellIndex(cx, cy)]) continue;
      const int px0 = (cx + 1) * pitch;
      const int py0 = cy * pitch + 1;
      const int x = px0 + 1;  // world index of the wall column
      const int yLo = py0 + 1 - 1;
      const int yHi = py0 + 1 + cw;
      fillBox(world, x - 1, x + 1, yLo, yHi, wallVox + 1, rimTop, true);
      fillBox(world, x, x, yLo + 1, yHi - 1, wallVox + 1, rimTop, false);
      placed = true;
    }
  }
  if (!placed) {
    for (int cy = 0; cy + 1 < config.cellsY && !placed; ++cy) {
      for (int cx = 0; cx < config.cellsX && !placed; ++cx) {
        if (openNorth[cellIndex(cx, cy)]) continue;
        const int py0 = (cy + 1) * pitch;
        const int px0 = cx * pitch + 1;
        const int y = py0 + 1;
        const int xLo = px0 + 1 - 1;
        const int xHi = px0 + 1 + cw;
        fillBox(world, xLo, xHi, y - 1, y + 1, wallVox + 1, rimTop, true);
        fillBox(world, xLo + 1, xHi - 1, y, y, wallVox + 1, rimTop, false);
        placed = true;
      }
    }
  }

  return world;
}

GroundTruthWorld generateWarehouse(const WarehouseConfig& config) {
  if (config.nx < 16 || config.ny < 16 || config.nz < 12) {
    throw std::invalid_argument("generateWarehouse: world too small");
  }
  GroundTruthWorld world(config.nx, config.ny, config.nz, config.resolution);
  world.closeShell();

  const int shelfTop = heightVoxels(config.shelfHeight, config.resolution);
  const int gapWidth = 6;
  Rng rng(Rng::deriveSeed(config.seed, 0x7761726568ULL));

  // Shelf rows run along x; the first aisle is left clear for start poses.
  int y = 1 + config.aisleVoxels;
  while (y + config.shelfDepthVoxels - 1 < config.ny - 1) {
    const int y1 = y + config.shelfDepthVoxels - 1;
    fillBox(world, 2, config.nx - 3, y, y1, 1, shelfTop, true);
    for (int gap = 0; gap < config.gapsPerRow; ++gap) {
      const int maxStart = config.nx - 3 - gapWidth;
      if (maxStart <= 2) break;
      const int x0 = 2 + static_cast<int>(rng.uniformInt(
                             static_cast<std::uint64_t>(maxStart - 2 + 1)));
      fillBox(world, x0, x0 + gapWidth - 1, y, y1, 1, shelfTop, false);
    }
    y += config.shelfDepthVoxels + config.aisleVoxels;
  }
  return world;
}

GroundTruthWorld generateMultiLevel(const MultiLevelConfig& config) {
  if (config.slabLayer < 4 || config.slabLayer + kSkyBlock + 2 > config.nz - 1) {
    throw std::invalid_argument("generateMultiLevel: slab layer out of range");
  }
  GroundTruthWorld world(config.nx, config.ny, config.nz, config.resolution);
  world.closeShell();

  // Slab with a block-aligned square hole; the hole is the only connection
  // between the two levels.
  fillBox(world, 1, config.nx - 2, 1, config.ny - 2, config.slabLayer, config.slabLayer,
          true);
  const int holeX = (config.nx / 2 / kSkyBlock) * kSkyBlock;
  const int holeY = (config.ny / 2 / kSkyBlock) * kSkyBlock;
  fillBox(world, holeX, holeX + config.holeVoxels - 1, holeY,
          holeY + config.holeVoxels - 1, config.slabLayer, config.slabLayer, false);

  Rng rng(Rng::deriveSeed(config.seed, 0x6c6576656cULL));
  const auto placeCrates = [&](int zBase, int zRoof) {
    for (int crate = 0; crate < config.cratesPerLevel; ++crate) {
      const int sx = 2 + static_cast<int>(rng.uniformInt(2));
      const int sy = 2 + static_cast<int>(rng.uniformInt(2));
      const int sz = std::min(2 + static_cast<int>(rng.uniformInt(2)), zRoof - zBase);
      const int x0 = 2 + static_cast<int>(rng.uniformInt(
                             static_cast<std::uint64_t>(config.nx - 4 - sx)));
      const int y0 = 2 + static_cast<int>(rng.uniformInt(
                             static_cast<std::uint64_t>(config.ny - 4 - sy)));
      // Keep the start corner and the hole column clear.
      if (x0 < 10 && y0 < 10 && zBase == 1) continue;
      if (x0 + sx >= holeX - 1 && x0 <= holeX + config.holeVoxels &&
          y0 + sy >= holeY - 1 && y0 <= holeY + config.holeVoxels) {
        continue;
      }
      fillBox(world, x0, x0 + sx - 1, y0, y0 + sy - 1, zBase, zBase + sz - 1, true);
    }
  };
  placeCrates(1, config.slabLayer - 1);
  placeCrates(config.slabLayer + 1, config.nz - 2);

  return world;
}

}  // namespace tandem
