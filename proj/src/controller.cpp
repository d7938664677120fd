#include "occnav/controller.hpp"

#include <algorithm>
#include <cmath>

namespace occnav {

void PassThroughLatch::engage(const PassageClass& cls, const Pose2D& robot) {
  if (active_ || cls.kind == PassageKind::NoPassage || !cls.anchor) return;
  if (cls.kind == PassageKind::WallPassage || cls.vertices.size() < 2) {
    point_ = *cls.anchor;
    normal_ = direction_of(robot.heading);
  } else {
    point_ = cls.vertices[0];
    const WorldPoint base = cls.vertices[1] - cls.vertices[0];
    normal_ = Eigen::Vector2d(-base.y(), base.x()).normalized();
  }
  start_side_ = (robot.position - point_).dot(normal_);
  if (start_side_ == 0.0) start_side_ = -1.0;
  kind_ = cls.kind;
  active_ = true;
}

void PassThroughLatch::update(const WorldPoint& robot) {
  if (!active_) return;
  const double side = (robot - point_).dot(normal_);
  if (side * start_side_ < 0.0) {
    active_ = false;
    kind_ = PassageKind::NoPassage;
  }
}

std::vector<VisibleHuman> perceive(const OccupancyGrid& grid, const Pose2D& pose,
                                   const std::vector<VisibleHuman>& humans, double max_range) {
  std::vector<VisibleHuman> seen;
  for (const auto& h : humans) {
    if ((h.position - pose.position).norm() > max_range) continue;
    if (!segment_clear(grid, pose.position, h.position)) continue;
    seen.push_back(h);
  }
  return seen;
}

CycleResult control_cycle(ControllerState& state, const LocalPlanner& planner, const World& world,
                          const ControllerConfig& config) {
  CycleResult result;
  CycleDiagnostics& diag = result.diagnostics;
  diag.t = state.time;
  diag.position = state.pose.position;
  for (const auto& h : world.humans)
    diag.min_dist_vis = std::min(diag.min_dist_vis, (h.position - state.pose.position).norm());

  state.latch.update(state.pose.position);

  if ((world.goal - state.pose.position).norm() < config.plan.goal_tolerance) {
    result.goal_reached = true;
    diag.mode = state.latch.active() ? PlanMode::PassThrough : PlanMode::Normal;
    return result;
  }

  const Detection detection =
      detect(planner.grid(), state.pose, config.detection, config.scan);
  diag.detections = detection.humans;
  for (const auto& h : detection.humans)
    diag.min_dist_inv = std::min(diag.min_dist_inv, (h.position - state.pose.position).norm());

  if (config.passage_mode) {
    diag.passage = classify_passage(detection.humans, detection.scan, config.passage);
    state.latch.engage(diag.passage, state.pose);
  }

  PlanDirective directive;
  if (state.latch.active()) {
    PassageClass latched;
    latched.kind = state.latch.kind();
    directive = passage_directive(latched, config.plan.vmax_passthrough);
  }
  if (!config.invisible_cost) directive.disable_invisible_cost = true;
  diag.mode = directive.mode;

  const std::vector<WorldPoint> invisible = positions_of(detection.humans);
  diag.perceived = perceive(planner.grid(), state.pose, world.humans, config.scan.max_range);

  PlanRequest request;
  request.pose = state.pose;
  request.goal = world.goal;
  request.invisible = invisible;
  request.visible = diag.perceived;
  request.directive = directive;
  request.previous = state.previous ? &*state.previous : nullptr;
  request.elapsed = state.since_plan;

  try {
    TimedTrajectory traj = optimize_cycle(planner, request);
    diag.costs = planner.objective_terms(traj, request);
    result.command = (traj.point(1) - traj.point(0)) / (traj.times(1) - traj.times(0));
    state.previous = std::move(traj);
    state.since_plan = 0.0;
  } catch (const PlanningFailure&) {
    result.planning_failed = true;
    state.previous.reset();
  }
  diag.command = result.command;
  return result;
}

}  // namespace occnav
