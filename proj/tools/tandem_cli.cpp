#include "tandem/exploration.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

using namespace tandem;

int statusToExitCode(RunStatus status) {
  switch (status) {
    case RunStatus::Complete:
      return 0;
    case RunStatus::Blocked:
      return 2;
    case RunStatus::MaxSteps:
      return 3;
  }
  return 1;
}

GroundTruthWorld makeWorld(const std::string& kind, std::uint64_t seed) {
  if (kind == "maze") {
    MazeConfig config;
    config.seed = seed;
    return generateMaze(config);
  }
  if (kind == "warehouse") {
    WarehouseConfig config;
    config.seed = seed;
    return generateWarehouse(config);
  }
  if (kind == "multilevel") {
    MultiLevelConfig config;
    config.seed = seed;
    return generateMultiLevel(config);
  }
  throw CLI::ValidationError("--kind", "unknown world kind: " + kind);
}

struct RunFlags {
  std::string worldFile;
  std::string kind;
  std::uint64_t worldSeed = 1;
  std::uint64_t seed = 1;
  double lambda = 0.05;
  int raysPerVoxel = 50;
  double epsilon = 1.0;
  int maxSteps = 200;
  std::string outDir = "out";
  int threads = 1;
  std::vector<double> ugvStart;
  std::vector<double> uavStart;
};

void addRunFlags(CLI::App* cmd, RunFlags* flags) {
  cmd->add_option("--world", flags->worldFile, "Voxel-world file (.voxw)");
  cmd->add_option("--kind", flags->kind,
                  "Generate the world instead: maze|warehouse|multilevel");
  cmd->add_option("--world-seed", flags->worldSeed, "Seed for --kind generation");
  cmd->add_option("--seed", flags->seed, "Master seed for the run");
  cmd->add_option("--lambda", flags->lambda, "View-quality distance discount (1/m)");
  cmd->add_option("--rays-per-voxel", flags->raysPerVoxel,
                  "Monte-Carlo samples per corridor cell");
  cmd->add_option("--epsilon", flags->epsilon, "Path-IG termination threshold");
  cmd->add_option("--max-steps", flags->maxSteps, "Maximum planning steps");
  cmd->add_option("--out", flags->outDir, "Output directory");
  cmd->add_option("--threads", flags->threads, "Worker threads (results unchanged)");
  cmd->add_option("--ugv-start", flags->ugvStart, "UGV start x,y")->expected(2);
  cmd->add_option("--uav-start", flags->uavStart, "UAV start x,y,z")->expected(3);
}

ExplorationConfig configFromFlags(const RunFlags& flags) {
  if (flags.worldFile.empty() && flags.kind.empty()) {
    throw CLI::ValidationError("--world", "provide --world FILE or --kind KIND");
  }
  GroundTruthWorld world = flags.worldFile.empty()
                               ? makeWorld(flags.kind, flags.worldSeed)
                               : GroundTruthWorld::load(flags.worldFile);
  ExplorationConfig config(std::move(world));
  config.masterSeed = flags.seed;
  config.lambda = flags.lambda;
  config.raysPerVoxel = flags.raysPerVoxel;
  config.epsilon = flags.epsilon;
  config.maxSteps = flags.maxSteps;
  config.threads = flags.threads;
  if (!flags.ugvStart.empty()) {
    config.ugvStart = Viewpoint{
        Vec3(flags.ugvStart[0], flags.ugvStart[1], config.ugv.sensorHeight), 0.0};
  }
  if (!flags.uavStart.empty()) {
    config.uavStart = Viewpoint{
        Vec3(flags.uavStart[0], flags.uavStart[1], flags.uavStart[2]), 0.0};
  }
  return config;
}

int writeRunOutputs(const ExplorationResult& result, const std::string& outDir) {
  const std::filesystem::path dir(outDir);
  std::filesystem::create_directories(dir);
  writeMetricsCsv(result.records, dir / "metrics.csv");
  writePathsCsv(result.executedPaths, dir / "paths.csv");
  result.finalMap.saveTriState(dir / "final_map.voxw");

  const CoverageStats coverage = result.finalMap.coverageStats();
  const char* statusName = result.status == RunStatus::Complete  ? "complete"
                           : result.status == RunStatus::Blocked ? "blocked"
                                                                 : "max-steps";
  std::printf("status: %s after %zu steps\n", statusName, result.records.size());
  std::printf("coverage: %.1f%% free, %.1f%% occupied, %.1f%% unknown\n",
              100.0 * coverage.fractionFree, 100.0 * coverage.fractionOccupied,
              100.0 * coverage.fractionUnknown);
  std::printf("outputs: %s\n", dir.string().c_str());
  return statusToExitCode(result.status);
}

int runExploreCommand(const RunFlags& flags) {
  return writeRunOutputs(runExploration(configFromFlags(flags)), flags.outDir);
}

int runBaselineCommand(const RunFlags& flags, const std::string& agent) {
  const BaselineAgent which = agent == "uav" ? BaselineAgent::Uav : BaselineAgent::Ugv;
  return writeRunOutputs(runSingleAgentBaseline(configFromFlags(flags), which),
                         flags.outDir);
}

int runGenWorldCommand(const std::string& kind, std::uint64_t seed,
                       const std::string& outFile) {
  const GroundTruthWorld world = makeWorld(kind, seed);
  world.save(outFile);
  const GridGeometry& g = world.geometry();
  std::printf("%s world %dx%dx%d @ %.2f m -> %s\n", kind.c_str(), g.nx, g.ny, g.nz,
              g.resolution, outFile.c_str());
  return 0;
}

int runRenderVqCommand(const std::string& mapFile, const std::string& outFile,
                       int raysPerVoxel, std::uint64_t seed,
                       const std::vector<double>& poseFlag) {
  const OccupancyMap map = OccupancyMap::loadTriState(mapFile);
  const AgentSpec ugv = AgentSpec::defaultUgv();

  std::optional<Viewpoint> pose;
  if (!poseFlag.empty()) {
    pose = Viewpoint{Vec3(poseFlag[0], poseFlag[1], ugv.sensorHeight), 0.0};
  } else {
    // First collision-valid plane cell in scan order.
    const GridGeometry& g = map.geometry();
    const int layer = g.keyOf(Vec3(g.origin.x(), g.origin.y(), ugv.sensorHeight)).iz;
    for (int iy = 0; iy < g.ny && !pose; ++iy) {
      for (int ix = 0; ix < g.nx && !pose; ++ix) {
        Vec3 center = g.centerOf(VoxelKey{ix, iy, layer});
        center.z() = ugv.sensorHeight;
        const Viewpoint candidate{center, 0.0};
        if (isStateValid(map, ugv, candidate)) pose = candidate;
      }
    }
    if (!pose) {
      std::fprintf(stderr, "render-vq: no valid ground pose in this map\n");
      return 1;
    }
  }

  const Corridor corridor = computeGroundCorridor(map, ugv, *pose);
  if (corridor.empty()) {
    std::fprintf(stderr, "render-vq: empty corridor at the chosen pose\n");
    return 1;
  }
  const auto frontierSet = batchFrontiers(map);
  const std::vector<VoxelKey> frontiers(frontierSet.begin(), frontierSet.end());
  const AgentFrontiers assigned = distributeToAgent(frontiers, corridor, map);
  const ViewQualityImage image =
      renderViewQuality(corridor, assigned.frontiers, map, raysPerVoxel, seed);

  std::ofstream out(outFile);
  if (!out) {
    std::fprintf(stderr, "render-vq: cannot open %s\n", outFile.c_str());
    return 1;
  }
  writeViewQualityCsv(image, out);
  std::printf("view-quality image: %zu cells, %zu frontiers -> %s\n",
              image.cells.size(), assigned.frontiers.size(), outFile.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Collaborative UAV-UGV exploration engine"};
  app.require_subcommand(1);

  RunFlags exploreFlags;
  CLI::App* explore = app.add_subcommand("explore", "Run the two-agent exploration loop");
  addRunFlags(explore, &exploreFlags);

  RunFlags baselineFlags;
  std::string baselineAgent;
  CLI::App* baseline = app.add_subcommand("baseline", "Run a single-agent baseline");
  baseline->add_option("--agent", baselineAgent, "uav|ugv")
      ->required()
      ->check(CLI::IsMember({"uav", "ugv"}));
  addRunFlags(baseline, &baselineFlags);

  std::string genKind = "maze";
  std::uint64_t genSeed = 1;
  std::string genOut;
  CLI::App* genWorld = app.add_subcommand("gen-world", "Generate a voxel world file");
  genWorld->add_option("--kind", genKind, "maze|warehouse|multilevel")
      ->check(CLI::IsMember({"maze", "warehouse", "multilevel"}));
  genWorld->add_option("--seed", genSeed, "Generator seed");
  genWorld->add_option("--out", genOut, "Output .voxw file")->required();

  std::string vqMap;
  std::string vqOut;
  int vqRays = 50;
  std::uint64_t vqSeed = 1;
  std::vector<double> vqPose;
  CLI::App* renderVq =
      app.add_subcommand("render-vq", "Render a view-quality image from a map");
  renderVq->add_option("--map", vqMap, "Tri-state map file (.voxw)")->required();
  renderVq->add_option("--out", vqOut, "Output CSV")->required();
  renderVq->add_option("--rays-per-voxel", vqRays, "Samples per corridor cell");
  renderVq->add_option("--seed", vqSeed, "Sampling seed");
  renderVq->add_option("--pose", vqPose, "Ground pose x,y")->expected(2);

  CLI11_PARSE(app, argc, argv);

  try {
    if (explore->parsed()) return runExploreCommand(exploreFlags);
    if (baseline->parsed()) return runBaselineCommand(baselineFlags, baselineAgent);
    if (genWorld->parsed()) return runGenWorldCommand(genKind, genSeed, genOut);
    if (renderVq->parsed()) {
      return runRenderVqCommand(vqMap, vqOut, vqRays, vqSeed, vqPose);
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 1;
}
