#pragma once

#include "occnav/cost.hpp"
#include "occnav/distance_field.hpp"
#include "occnav/passage.hpp"
#include "occnav/trajectory.hpp"

#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace occnav {

struct PlanWeights {
  double goal = 0.5;        // squared distance of the last waypoint to the goal
  double progress = 0.1;    // per-waypoint pull toward the goal (pseudo-Huber distance)
  double speed = 1.0;       // squared deviation of segment speed from the reference speed
  double obstacle = 0.01;   // inverse clearance to occupied cells
  double smoothness = 20.0; // squared second differences
  double invisible = 1.0;   // invisible-humans cost
  double visible = 0.5;     // inverse clearance to visible humans
};

struct PlanConfig {
  double vmax = 0.7;
  double vmax_passthrough = 0.3;
  int waypoint_count = 30;
  double horizon = 5.0;  // s
  PlanWeights weights;
  double robot_radius = 0.5;
  double obstacle_clearance = 0.2;  // m beyond the robot radius
  double visible_clearance = 0.6;   // m beyond the robot radius
  int iterations = 40;
  double max_waypoint_step = 0.05;  // m per iteration
  double cycle_period = 0.1;        // s
  double goal_tolerance = 0.1;      // m
  InvisibleCostParams invisible_model;  // weight is taken from weights.invisible

  double waypoint_dt() const { return horizon / (waypoint_count - 1); }
  void validate() const;
};

struct VisibleHuman {
  WorldPoint position = WorldPoint::Zero();
  Eigen::Vector2d velocity = Eigen::Vector2d::Zero();
};

class PlanningFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PlanRequest {
  Pose2D pose;
  WorldPoint goal = WorldPoint::Zero();
  std::span<const WorldPoint> invisible;
  std::span<const VisibleHuman> visible;
  PlanDirective directive;
  const TimedTrajectory* previous = nullptr;  // warm start
  double elapsed = 0.0;                       // s since `previous` was planned
};

/// Weighted objective terms of one trajectory.
struct ObjectiveBreakdown {
  double goal = 0.0;
  double progress = 0.0;
  double speed = 0.0;
  double obstacle = 0.0;
  double smoothness = 0.0;
  double invisible = 0.0;
  double visible = 0.0;
  double total() const { return goal + progress + speed + obstacle + smoothness + invisible + visible; }
};

/// Fixed-horizon waypoint optimizer: projected gradient descent with backtracking over
/// goal, clearance, smoothness and human costs, under a per-segment speed cap.
class LocalPlanner {
 public:
  LocalPlanner(OccupancyGrid grid, PlanConfig config);

  const OccupancyGrid& grid() const { return grid_; }
  const PlanConfig& config() const { return config_; }
  const DistanceField& field() const { return field_; }

  double speed_cap(const PlanDirective& directive) const;

  /// Cheaper of the warm start (previous plan shifted by the elapsed time) and a fresh
  /// straight-line or A* seed, projected onto the cap.
  TimedTrajectory seed(const PlanRequest& request) const;
  TimedTrajectory optimize(const PlanRequest& request) const;

  ObjectiveBreakdown objective_terms(const TimedTrajectory& traj, const PlanRequest& request) const;
  double objective(const TimedTrajectory& traj, const PlanRequest& request) const;
  Eigen::Matrix2Xd objective_gradient(const TimedTrajectory& traj, const PlanRequest& request) const;

  /// Enforces |p_i - p_{i-1}| <= cap * dt front to back, keeping p_0 fixed.
  void project_speed(TimedTrajectory& traj, double cap) const;

  /// 8-connected A* over cells with clearance >= robot radius. Empty when unreachable.
  std::vector<WorldPoint> shortest_path(const WorldPoint& from, const WorldPoint& to) const;

  /// Segment clearance check for the robot footprint.
  bool footprint_clear(const WorldPoint& a, const WorldPoint& b) const;

 private:
  double invisible_weight(const PlanRequest& request) const;
  /// Speed the robot should hold on segment i: the cap, ramped to zero where the straight-line
  /// distance to the goal runs out.
  double reference_speed(const PlanRequest& request, const TimedTrajectory& traj, int segment) const;
  TimedTrajectory straight_seed(const PlanRequest& request, double cap) const;
  TimedTrajectory path_seed(const std::vector<WorldPoint>& path, double cap) const;

  OccupancyGrid grid_;
  PlanConfig config_;
  DistanceField field_;
};

/// One optimization cycle; throws PlanningFailure when no seed exists.
TimedTrajectory optimize_cycle(const LocalPlanner& planner, const PlanRequest& request);

}  // namespace occnav
