#include "tandem/exploration.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>

namespace tandem {

namespace {

void writeAgentRow(std::ostream& out, const StepRecord& record, const char* agent,
                   const AgentStepRecord& a) {
  char line[320];
  std::snprintf(line, sizeof(line),
                "%d,%s,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%zu\n",
                record.step, agent, a.goal.x(), a.goal.y(), a.goal.z(), a.pathLength,
                a.igBefore, a.igAfter, a.planTime, record.coverage.fractionFree,
                record.coverage.fractionOccupied, record.coverage.fractionUnknown,
                record.frontierCount);
  out << line;
}

}  // namespace

void writeMetricsCsv(const std::vector<StepRecord>& records, std::ostream& out) {
  out << "step,agent,goal_x,goal_y,goal_z,path_len_m,ig_before,ig_after,plan_time_s,"
         "cov_free,cov_occ,cov_unknown,frontier_count\n";
  for (const StepRecord& record : records) {
    if (record.ugvPresent) writeAgentRow(out, record, "ugv", record.ugv);
    if (record.uavPresent) writeAgentRow(out, record, "uav", record.uav);
  }
}

void writeMetricsCsv(const std::vector<StepRecord>& records,
                     const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("writeMetricsCsv: cannot open " + path.string());
  writeMetricsCsv(records, out);
  if (!out) throw std::runtime_error("writeMetricsCsv: write failed for " + path.string());
}

void writePathsCsv(const std::vector<ExecutedPath>& paths, std::ostream& out) {
  out << "step,agent,x,y,z,yaw\n";
  char line[192];
  for (const ExecutedPath& entry : paths) {
    for (const Viewpoint& vp : entry.path.viewpoints) {
      std::snprintf(line, sizeof(line), "%d,%s,%.6f,%.6f,%.6f,%.6f\n", entry.step,
                    entry.agent.c_str(), vp.position.x(), vp.position.y(),
                    vp.position.z(), vp.yaw);
      out << line;
    }
  }
}

void writePathsCsv(const std::vector<ExecutedPath>& paths,
                   const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("writePathsCsv: cannot open " + path.string());
  writePathsCsv(paths, out);
  if (!out) throw std::runtime_error("writePathsCsv: write failed for " + path.string());
}

}  // namespace tandem
