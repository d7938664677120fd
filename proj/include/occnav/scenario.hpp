#pragma once

#include "occnav/controller.hpp"
#include "occnav/random.hpp"

#include <filesystem>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

namespace occnav {

/// Piecewise-linear walk through (x, y, t) knots. Before the first knot the human stands
/// at it; after the last one it stays there.
struct HumanScript {
  std::vector<Eigen::Vector3d> knots;

  WorldPoint position_at(double t) const;
  Eigen::Vector2d velocity_at(double t) const;
  void validate() const;
};

/// Seeded perturbation applied per human: whole-script time shift and position shift,
/// each uniform in [-x, x].
struct ScriptJitter {
  double time_s = 0.0;
  double position_m = 0.0;
};

struct Scenario {
  std::string name;
  std::string map_ref;  // path as written in the scenario file
  std::shared_ptr<const OccupancyGrid> map;
  Pose2D start;
  WorldPoint goal = WorldPoint::Zero();
  std::vector<HumanScript> humans;
  ScriptJitter jitter;
  std::uint64_t seed = 0;
  double duration_s = 60.0;
  ControllerConfig controller;  // features map to controller.invisible_cost / passage_mode

  void validate() const;
  /// Scripts after applying the seeded jitter.
  std::vector<HumanScript> jittered_humans() const;
};

/// Reads a scenario JSON; `map` is resolved relative to the file. Throws std::runtime_error
/// (MapError, std::invalid_argument, json errors) on bad input.
Scenario load_scenario(const std::filesystem::path& file);
/// Writes the JSON; the map itself is saved separately under `map_ref`.
void save_scenario(const Scenario& s, const std::filesystem::path& file);

struct RunRecord {
  std::vector<CycleDiagnostics> cycles;
  double min_human_distance = std::numeric_limits<double>::infinity();
  bool completed = false;
  bool planning_failed = false;

  std::vector<WorldPoint> path() const;
  std::vector<double> speeds() const;
  double path_length() const;
};

/// Closed-loop run of the controller at the planner's cycle period.
RunRecord run_scenario(const Scenario& s);

/// Human-blind baseline: A* once, then pure pursuit at vmax.
RunRecord run_naive_baseline(const Scenario& s);

/// `t,x,y,vx,vy,mode,n_detections,min_dist_inv,min_dist_vis`; missing distances as NA.
void write_record_csv(const RunRecord& record, std::ostream& out);

struct RecordRow {
  double t = 0.0;
  WorldPoint position = WorldPoint::Zero();
  Eigen::Vector2d velocity = Eigen::Vector2d::Zero();
  std::string mode;
  int n_detections = 0;
  double min_dist_inv = std::numeric_limits<double>::quiet_NaN();
  double min_dist_vis = std::numeric_limits<double>::quiet_NaN();
};

std::vector<RecordRow> read_record_csv(std::istream& in);

}  // namespace occnav
