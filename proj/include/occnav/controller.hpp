#pragma once

#include "occnav/detect.hpp"
#include "occnav/passage.hpp"
#include "occnav/plan.hpp"

#include <limits>
#include <optional>
#include <vector>

namespace occnav {

struct ControllerConfig {
  PlanConfig plan;
  DetectionParams detection;
  ScanConfig scan;
  PassageLimits passage;
  bool invisible_cost = true;  // feed detections to the planner
  bool passage_mode = true;    // classify passages and latch PassThrough
};

/// Holds PassThrough from classification until the robot crosses the release line.
class PassThroughLatch {
 public:
  /// Engages on Doorway/Pillar/WallPassage; no-op for NoPassage or when already active.
  void engage(const PassageClass& cls, const Pose2D& robot);
  /// Releases once the robot is on the other side of the line it started on.
  void update(const WorldPoint& robot);

  bool active() const { return active_; }
  PassageKind kind() const { return kind_; }
  WorldPoint line_point() const { return point_; }
  Eigen::Vector2d line_normal() const { return normal_; }

 private:
  bool active_ = false;
  PassageKind kind_ = PassageKind::NoPassage;
  WorldPoint point_ = WorldPoint::Zero();
  Eigen::Vector2d normal_ = Eigen::Vector2d::UnitX();
  double start_side_ = 0.0;
};

struct ControllerState {
  Pose2D pose;
  double time = 0.0;
  std::optional<TimedTrajectory> previous;
  double since_plan = 0.0;
  PassThroughLatch latch;
};

/// What the robot may know about the world this cycle (the static map is the planner's).
struct World {
  WorldPoint goal = WorldPoint::Zero();
  std::vector<VisibleHuman> humans;  // ground truth; perception filters by line of sight
};

struct CycleDiagnostics {
  double t = 0.0;
  WorldPoint position = WorldPoint::Zero();
  Eigen::Vector2d command = Eigen::Vector2d::Zero();
  PlanMode mode = PlanMode::Normal;
  PassageClass passage;
  std::vector<InvisibleHuman> detections;
  std::vector<VisibleHuman> perceived;
  double min_dist_inv = std::numeric_limits<double>::infinity();
  double min_dist_vis = std::numeric_limits<double>::infinity();  // to any human, seen or not
  ObjectiveBreakdown costs;
};

struct CycleResult {
  Eigen::Vector2d command = Eigen::Vector2d::Zero();
  CycleDiagnostics diagnostics;
  bool goal_reached = false;
  bool planning_failed = false;
};

/// Humans within range and line of sight of the robot.
std::vector<VisibleHuman> perceive(const OccupancyGrid& grid, const Pose2D& pose,
                                   const std::vector<VisibleHuman>& humans, double max_range);

/// detect -> classify_passage -> passage_directive -> optimize_cycle. Updates the warm
/// start and latch; does not move the robot. Planning failure yields a zero command.
CycleResult control_cycle(ControllerState& state, const LocalPlanner& planner, const World& world,
                          const ControllerConfig& config);

}  // namespace occnav
