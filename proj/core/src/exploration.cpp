#include "tandem/exploration.hpp"

#include "tandem/rng.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

namespace tandem {

namespace {

using Clock = std::chrono::steady_clock;

double secondsSince(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

bool groundTruthBoxFree(const GroundTruthWorld& world, const Box3& box) {
  const GridGeometry& g = world.geometry();
  const double eps = g.resolution * 1e-9;
  const VoxelKey lo = g.keyOf(box.min() + Vec3::Constant(eps));
  const VoxelKey hi = g.keyOf(box.max() - Vec3::Constant(eps));
  if (!g.inBounds(lo) || !g.inBounds(hi)) return false;
  for (int iz = lo.iz; iz <= hi.iz; ++iz) {
    for (int iy = lo.iy; iy <= hi.iy; ++iy) {
      for (int ix = lo.ix; ix <= hi.ix; ++ix) {
        if (world.occupied(VoxelKey{ix, iy, iz})) return false;
      }
    }
  }
  return true;
}

// Seed tags for deriving independent per-step RNG streams.
constexpr std::uint64_t kTagRender = 0x11;
constexpr std::uint64_t kTagRrtGround = 0x22;
constexpr std::uint64_t kTagRrtAerial = 0x33;

struct AgentPlan {
  bool hasPath = false;
  Viewpoint goal;
  Path path;       // raw planned (and, for the aerial agent, yaw-optimized)
  Path densified;  // executed viewpoints
  double igBefore = 0.0;
  double igAfter = 0.0;
  double planTime = 0.0;
};

/// Shared driver for the team run and the single-agent baselines.
class ExplorationRun {
 public:
  ExplorationRun(const ExplorationConfig& config, bool useUgv, bool useUav)
      : cfg_(config),
        useUgv_(useUgv),
        useUav_(useUav),
        map_(config.world.bounds(), config.world.resolution()),
        tracker_(map_) {
    if (useUgv_) {
      ugvPose_ = cfg_.ugvStart ? *cfg_.ugvStart : autoGroundStart(cfg_.world, cfg_.ugv);
      initAgent(cfg_.ugv, ugvPose_);
    }
    if (useUav_) {
      uavPose_ = cfg_.uavStart ? *cfg_.uavStart : autoAerialStart(cfg_.world, cfg_.uav);
      initAgent(cfg_.uav, uavPose_);
    }
    tracker_ = FrontierTracker(map_);
  }

  ExplorationResult run() {
    if (cfg_.initObserver) cfg_.initObserver(map_);
    RunStatus status = RunStatus::MaxSteps;
    for (int step = 1; step <= cfg_.maxSteps; ++step) {
      if (tracker_.empty()) {
        status = RunStatus::Complete;
        break;
      }
      const std::vector<VoxelKey> frontiers = tracker_.sorted();

      const auto prepStart = Clock::now();
      Corridor groundCorr, aerialCorr;
      if (useUgv_) groundCorr = computeGroundCorridor(map_, cfg_.ugv, ugvPose_);
      if (useUav_) aerialCorr = computeAerialCorridor(map_, cfg_.uav, uavPose_);

      AgentFrontiers groundSet, aerialSet;
      if (useUgv_ && useUav_) {
        FrontierPartition partition =
            distributeFrontiers(frontiers, groundCorr, aerialCorr, map_, cfg_.threads);
        groundSet = std::move(partition.ground);
        aerialSet = std::move(partition.aerial);
      } else if (useUgv_) {
        groundSet = distributeToAgent(frontiers, groundCorr, map_, cfg_.threads);
      } else {
        aerialSet = distributeToAgent(frontiers, aerialCorr, map_, cfg_.threads);
      }
      const double prepTime = secondsSince(prepStart);

      AgentPlan ugvPlan, uavPlan;
      if (useUgv_) ugvPlan = planGround(step, groundCorr, groundSet, frontiers);
      if (useUav_) {
        uavPlan = planAerial(step, aerialCorr, aerialSet, frontiers,
                             useUgv_ && ugvPlan.hasPath
                                 ? std::optional<Vec3>(ugvPlan.goal.position)
                                 : std::nullopt);
      }
      const double prepShare = (useUgv_ && useUav_) ? prepTime / 2.0 : prepTime;
      if (useUgv_) ugvPlan.planTime += prepShare;
      if (useUav_) uavPlan.planTime += prepShare;

      const bool anyPath = ugvPlan.hasPath || uavPlan.hasPath;
      const double unknownBefore = map_.coverageStats().fractionUnknown;
      if (useUgv_ && ugvPlan.hasPath) execute(step, cfg_.ugv, ugvPlan, &ugvPose_);
      if (useUav_ && uavPlan.hasPath) execute(step, cfg_.uav, uavPlan, &uavPose_);

      StepRecord record;
      record.step = step;
      record.ugvPresent = useUgv_;
      record.uavPresent = useUav_;
      record.ugv = toRecord(ugvPlan, ugvPose_);
      record.uav = toRecord(uavPlan, uavPose_);
      record.coverage = map_.coverageStats();
      record.frontierCount = tracker_.size();
      records_.push_back(record);
      if (cfg_.stepObserver) cfg_.stepObserver(record, map_);

      if (!anyPath) {
        status = tracker_.empty() ? RunStatus::Complete : RunStatus::Blocked;
        break;
      }
      if (tracker_.empty()) {
        status = RunStatus::Complete;
        break;
      }
      // Low path IG alone can be start-up myopia (a young map means a tiny
      // corridor and a short path); it ends the run only once a step also
      // observes nothing new. The unknown count strictly decreases on every
      // continued step, so the loop cannot cycle.
      const bool ugvDone = !useUgv_ || !ugvPlan.hasPath || ugvPlan.igAfter <= cfg_.epsilon;
      const bool uavDone = !useUav_ || !uavPlan.hasPath || uavPlan.igAfter <= cfg_.epsilon;
      const bool progressed = record.coverage.fractionUnknown < unknownBefore;
      if (ugvDone && uavDone && !progressed) {
        status = RunStatus::Complete;
        break;
      }
    }

    ExplorationResult result{status, std::move(records_), std::move(map_),
                             std::move(executedPaths_), uavPose_, ugvPose_};
    return result;
  }

 private:
  void initAgent(const AgentSpec& agent, const Viewpoint& pose) {
    const Box3 body(pose.position - agent.collisionHalfExtents,
                    pose.position + agent.collisionHalfExtents);
    if (!groundTruthBoxFree(cfg_.world, body)) {
      throw std::invalid_argument("exploration: start pose of " + agent.name +
                                  " collides with the world");
    }
    // The agent's own body volume is known free space.
    map_.markFreeBox(body);
    if (agent.motion == MotionType::Aerial) {
      // Its start block too, when ground truth confirms it clear, so the
      // initial aerial corridor is never empty.
      const int factor = aerialCoarseFactor(map_.resolution(), agent.collisionHalfExtents);
      const GridGeometry& g = map_.geometry();
      const VoxelKey base = g.keyOf(pose.position);
      const Vec3 lo = g.origin + g.resolution * factor *
                                     Vec3(base.ix / factor, base.iy / factor,
                                          base.iz / factor);
      const Box3 block(lo, lo + Vec3::Constant(g.resolution * factor));
      if (groundTruthBoxFree(cfg_.world, block)) map_.markFreeBox(block);
    }

    const int spins = agent.sensor.kind == SensorKind::Lidar360 ? 1 : 4;
    for (int k = 0; k < spins; ++k) {
      Viewpoint vp = pose;
      vp.yaw = wrapToPi(pose.yaw + k * (2.0 * kPi / spins));
      integrateAt(vp, agent.sensor);
    }
  }

  void integrateAt(const Viewpoint& vp, const SensorModel& sensor) {
    const auto scan = simulateScan(cfg_.world, sensor, vp);
    const auto changed = map_.integrateScan(vp.position, scan);
    tracker_.applyScanChanges(map_, changed);
  }

  AgentPlan planGround(int step, const Corridor& corridor, const AgentFrontiers& assigned,
                       const std::vector<VoxelKey>& allFrontiers) {
    AgentPlan plan;
    const auto t0 = Clock::now();
    if (corridor.empty() || assigned.frontiers.empty()) {
      plan.planTime = secondsSince(t0);
      return plan;
    }
    const ViewQualityImage image = renderViewQuality(
        corridor, assigned.frontiers, map_, cfg_.raysPerVoxel,
        Rng::deriveSeed(cfg_.masterSeed, static_cast<std::uint64_t>(step), kTagRender),
        cfg_.threads);

    std::set<VoxelKey> banned;
    for (int attempt = 0; attempt <= cfg_.maxGoalRetries; ++attempt) {
      const auto goal = selectGroundGoal(image, ugvPose_, cfg_.lambda, banned);
      if (!goal) break;
      RrtParams rrt = cfg_.rrt;
      rrt.seed = Rng::deriveSeed(cfg_.masterSeed,
                                 static_cast<std::uint64_t>(step) * 64 + attempt,
                                 kTagRrtGround);
      rrt.samplingBox = corridor.boundingBox();
      const auto path = planRrt(map_, cfg_.ugv, ugvPose_, *goal, rrt);
      if (path) {
        plan.hasPath = true;
        plan.goal = *goal;
        plan.path = *path;
        plan.densified = densifyPath(*path, cfg_.densifySpacing);
        // IG over the executed (densified) viewpoints: these are where the
        // map updates happen.
        const PathIg ig = hardPathIg(map_, allFrontiers, cfg_.ugv.sensor, plan.densified);
        plan.igBefore = ig.value;
        plan.igAfter = ig.value;  // ground paths are not optimized
        break;
      }
      banned.insert(map_.geometry().keyOf(goal->position));
    }
    plan.planTime = secondsSince(t0);
    return plan;
  }

  AgentPlan planAerial(int step, const Corridor& corridor, const AgentFrontiers& assigned,
                       const std::vector<VoxelKey>& allFrontiers,
                       const std::optional<Vec3>& groundGoal) {
    AgentPlan plan;
    const auto t0 = Clock::now();
    if (corridor.empty()) {
      plan.planTime = secondsSince(t0);
      return plan;
    }
    // The ground agent's priority can strip the aerial set bare near the end
    // of a run; rather than idling, the aerial agent then works its own pass
    // over the full frontier set, exactly like a lone agent would.
    std::vector<VoxelKey> targets = assigned.frontiers;
    if (targets.empty()) {
      targets = distributeToAgent(allFrontiers, corridor, map_, cfg_.threads).frontiers;
    }
    if (targets.empty()) {
      plan.planTime = secondsSince(t0);
      return plan;
    }
    const auto clusters = clusterFrontiers(targets, cfg_.clusterFactor, map_.geometry());

    std::set<VoxelKey> banned;
    const double conflictRadius = cfg_.clusterFactor * map_.resolution();
    for (int attempt = 0; attempt <= cfg_.maxGoalRetries; ++attempt) {
      const auto goal = selectAerialGoal(clusters, corridor, map_, uavPose_, cfg_.lambda,
                                         banned);
      if (!goal) break;
      // Ground priority on colliding goals: the aerial agent moves on to its
      // next-best cluster.
      if (groundGoal && (goal->pose.position - *groundGoal).norm() <= conflictRadius) {
        banned.insert(goal->clusterBlock);
        continue;
      }
      RrtParams rrt = cfg_.rrt;
      rrt.seed = Rng::deriveSeed(cfg_.masterSeed,
                                 static_cast<std::uint64_t>(step) * 64 + attempt,
                                 kTagRrtAerial);
      rrt.samplingBox = corridor.boundingBox();
      const auto path = planRrt(map_, cfg_.uav, uavPose_, goal->pose, rrt);
      if (!path) {
        banned.insert(goal->clusterBlock);
        continue;
      }
      const auto optimized =
          optimizePathYaw(*path, map_, allFrontiers, cfg_.uav, cfg_.soft,
                          cfg_.yawOptIters, cfg_.threads);
      plan.hasPath = true;
      plan.goal = optimized.path.viewpoints.back();
      plan.path = optimized.path;
      plan.densified = densifyPath(optimized.path, cfg_.densifySpacing);
      // Before/after IG over the executed (densified) viewpoints.
      plan.igBefore =
          hardPathIg(map_, allFrontiers, cfg_.uav.sensor,
                     densifyPath(*path, cfg_.densifySpacing))
              .value;
      plan.igAfter =
          hardPathIg(map_, allFrontiers, cfg_.uav.sensor, plan.densified).value;
      break;
    }
    plan.planTime = secondsSince(t0);
    return plan;
  }

  void execute(int step, const AgentSpec& agent, const AgentPlan& plan, Viewpoint* pose) {
    for (const Viewpoint& vp : plan.densified.viewpoints) {
      integrateAt(vp, agent.sensor);
    }
    *pose = plan.densified.viewpoints.back();
    executedPaths_.push_back(ExecutedPath{step, agent.name, plan.densified});
  }

  AgentStepRecord toRecord(const AgentPlan& plan, const Viewpoint& pose) const {
    AgentStepRecord record;
    record.active = plan.hasPath;
    record.goal = plan.hasPath ? plan.goal.position : pose.position;
    record.pathLength = plan.hasPath ? plan.path.length() : 0.0;
    record.igBefore = plan.igBefore;
    record.igAfter = plan.igAfter;
    record.planTime = plan.planTime;
    return record;
  }

  const ExplorationConfig& cfg_;
  bool useUgv_;
  bool useUav_;
  OccupancyMap map_;
  FrontierTracker tracker_;
  Viewpoint ugvPose_;
  Viewpoint uavPose_;
  std::vector<StepRecord> records_;
  std::vector<ExecutedPath> executedPaths_;
};

}  // namespace

ExplorationResult runExploration(const ExplorationConfig& config) {
  return ExplorationRun(config, true, true).run();
}

ExplorationResult runSingleAgentBaseline(const ExplorationConfig& config,
                                         BaselineAgent which) {
  return ExplorationRun(config, which == BaselineAgent::Ugv, which == BaselineAgent::Uav)
      .run();
}

}  // namespace tandem
