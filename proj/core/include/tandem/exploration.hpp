#pragma once

#include "tandem/agent.hpp"
#include "tandem/corridor.hpp"
#include "tandem/frontier.hpp"
#include "tandem/goal_select.hpp"
#include "tandem/occupancy_map.hpp"
#include "tandem/planner.hpp"
#include "tandem/world.hpp"
#include "tandem/yaw_optimizer.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace tandem {

enum class RunStatus { Complete, Blocked, MaxSteps };

/// Per-agent slice of one planning step.
struct AgentStepRecord {
  bool active = false;  // had a goal and executed a path this step
  Vec3 goal = Vec3::Zero();
  double pathLength = 0.0;
  double igBefore = 0.0;
  double igAfter = 0.0;
  double planTime = 0.0;  // seconds; excluded from determinism guarantees
};

struct StepRecord {
  int step = 0;
  bool ugvPresent = true;  // false in aerial-only baselines
  bool uavPresent = true;  // false in ground-only baselines
  AgentStepRecord ugv;
  AgentStepRecord uav;
  CoverageStats coverage;
  std::size_t frontierCount = 0;
};

/// Executed (densified) path of one agent in one step, for the path log.
struct ExecutedPath {
  int step = 0;
  std::string agent;
  Path path;
};

struct ExplorationConfig {
  GroundTruthWorld world;
  AgentSpec uav = AgentSpec::defaultUav();
  AgentSpec ugv = AgentSpec::defaultUgv();
  /// Defaults to the deterministic auto-derived start poses.
  std::optional<Viewpoint> uavStart;
  std::optional<Viewpoint> ugvStart;

  double lambda = 0.05;        // per meter, view-quality distance discount
  int raysPerVoxel = 50;       // Monte-Carlo samples per corridor cell
  double epsilon = 1.0;        // terminate when both path IGs fall to <= epsilon
  int clusterFactor = 8;
  double densifySpacing = 0.9;
  RrtParams rrt;
  SoftVisibilityParams soft;
  int yawOptIters = 100;
  int maxSteps = 200;
  int maxGoalRetries = 5;
  std::uint64_t masterSeed = 1;
  int threads = 1;

  /// Optional per-step observer (invoked after the step's scans integrate).
  std::function<void(const StepRecord&, const OccupancyMap&)> stepObserver;
  /// Optional observer of the freshly initialized map (after start seeding
  /// and the initial scans, before the first planning step).
  std::function<void(const OccupancyMap&)> initObserver;

  explicit ExplorationConfig(GroundTruthWorld w) : world(std::move(w)) {}
};

struct ExplorationResult {
  RunStatus status = RunStatus::MaxSteps;
  std::vector<StepRecord> records;
  OccupancyMap finalMap;
  std::vector<ExecutedPath> executedPaths;
  Viewpoint finalUav;
  Viewpoint finalUgv;
};

/// Runs the full two-agent exploration loop: distribute frontiers, select
/// goals, plan, optimize aerial yaws, densify, execute and integrate scans;
/// repeats until the optimized paths' hard IG falls to <= epsilon for both
/// agents, frontiers run out, both agents are stuck (Blocked) or maxSteps is
/// hit. Fully deterministic for a fixed master seed and any thread count.
ExplorationResult runExploration(const ExplorationConfig& config);

enum class BaselineAgent { Uav, Ugv };

/// Single-agent variant: the lone agent receives the frontier set filtered
/// by its own distribution pass.
ExplorationResult runSingleAgentBaseline(const ExplorationConfig& config,
                                         BaselineAgent which);

/// CSV with the exact header
/// step,agent,goal_x,goal_y,goal_z,path_len_m,ig_before,ig_after,plan_time_s,
/// cov_free,cov_occ,cov_unknown,frontier_count
/// and one row per (step, agent).
void writeMetricsCsv(const std::vector<StepRecord>& records, std::ostream& out);
void writeMetricsCsv(const std::vector<StepRecord>& records,
                     const std::filesystem::path& path);

/// CSV of executed path polylines: step,agent,x,y,z,yaw.
void writePathsCsv(const std::vector<ExecutedPath>& paths, std::ostream& out);
void writePathsCsv(const std::vector<ExecutedPath>& paths,
                   const std::filesystem::path& path);

}  // namespace tandem
