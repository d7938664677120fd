#include "occnav/plan.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <queue>

namespace occnav {

void PlanConfig::validate() const {
  if (!(vmax > 0.0) || !(vmax_passthrough > 0.0) || vmax_passthrough > vmax)
    throw std::invalid_argument("plan config: need 0 < vmax_passthrough <= vmax");
  if (waypoint_count < 3) throw std::invalid_argument("plan config: need at least 3 waypoints");
  if (!(horizon > 0.0) || !(cycle_period > 0.0) || !(goal_tolerance > 0.0))
    throw std::invalid_argument("plan config: horizon, cycle period and goal tolerance must be positive");
  if (!(robot_radius > 0.0) || !(obstacle_clearance > 0.0) || !(visible_clearance > 0.0))
    throw std::invalid_argument("plan config: radii must be positive");
  if (iterations < 0 || !(max_waypoint_step > 0.0))
    throw std::invalid_argument("plan config: bad iteration settings");
  const auto& w = weights;
  if (w.goal < 0 || w.progress < 0 || w.speed < 0 || w.obstacle < 0 || w.smoothness < 0 || w.invisible < 0 ||
      w.visible < 0)
    throw std::invalid_argument("plan config: weights must be non-negative");
  invisible_model.validate();
}

namespace {

constexpr double kClearanceFloor = 0.02;
constexpr double kProgressSoftening = 0.2;
constexpr double kGradientGain = 0.05;  // m of motion per unit gradient before clipping
constexpr int kBacktrackSteps = 8;

// (1/c - 1/R)^2 below R, zero above; c floored so contact stays finite.
double inverse_clearance(double c, double range) {
  if (c >= range) return 0.0;
  const double e = 1.0 / std::max(c, kClearanceFloor) - 1.0 / range;
  return e * e;
}

double inverse_clearance_slope(double c, double range) {
  if (c >= range || c < kClearanceFloor) return 0.0;
  return -2.0 * (1.0 / c - 1.0 / range) / (c * c);
}

struct Advance {
  double value = 0.0;
  WorldPoint d_from = WorldPoint::Zero();
  WorldPoint d_to = WorldPoint::Zero();
};

// Displacement a -> b projected on the unit vector from a toward the goal, with gradients.
Advance goalward_advance(const WorldPoint& a, const WorldPoint& b, const WorldPoint& goal) {
  Advance out;
  const WorldPoint r = goal - a;
  const double len = r.norm();
  if (len < 1e-9) return out;
  const WorldPoint u = r / len;
  const WorldPoint seg = b - a;
  out.value = seg.dot(u);
  out.d_to = u;
  out.d_from = -u - (seg - u * u.dot(seg)) / len;
  return out;
}

double pseudo_huber(double r2) {
  return std::sqrt(r2 + kProgressSoftening * kProgressSoftening) - kProgressSoftening;
}

}  // namespace

LocalPlanner::LocalPlanner(OccupancyGrid grid, PlanConfig config)
    : grid_(std::move(grid)), config_(std::move(config)), field_(grid_) {
  config_.validate();
}

double LocalPlanner::speed_cap(const PlanDirective& directive) const {
  return directive.vmax_cap ? std::min(config_.vmax, *directive.vmax_cap) : config_.vmax;
}

double LocalPlanner::reference_speed(const PlanRequest& request, const TimedTrajectory& traj,
                                     int segment) const {
  const double cap = speed_cap(request.directive);
  const double dt = traj.times(segment) - traj.times(segment - 1);
  const double remaining = (request.goal - traj.point(0)).norm() - cap * traj.times(segment - 1);
  return std::clamp(remaining / dt, 0.0, cap);
}

double LocalPlanner::invisible_weight(const PlanRequest& request) const {
  return request.directive.disable_invisible_cost ? 0.0 : config_.weights.invisible;
}

void LocalPlanner::project_speed(TimedTrajectory& traj, double cap) const {
  for (int i = 1; i < traj.size(); ++i) {
    const double limit = cap * (traj.times(i) - traj.times(i - 1));
    const WorldPoint d = traj.positions.col(i) - traj.positions.col(i - 1);
    const double length = d.norm();
    if (length > limit) traj.positions.col(i) = traj.positions.col(i - 1) + d * (limit / length);
  }
}

bool LocalPlanner::footprint_clear(const WorldPoint& a, const WorldPoint& b) const {
  const double length = (b - a).norm();
  // Starting pressed against a wall is allowed; the segment must not get any closer.
  const double need = std::min(config_.robot_radius, field_.distance(a)) - 1e-6;
  const int samples = std::max(1, static_cast<int>(std::ceil(length / (0.5 * grid_.resolution()))));
  for (int s = 1; s <= samples; ++s) {
    const WorldPoint p = a + (b - a) * (static_cast<double>(s) / samples);
    if (field_.distance(p) < need) return false;
  }
  return true;
}

TimedTrajectory LocalPlanner::straight_seed(const PlanRequest& request, double cap) const {
  const int n = config_.waypoint_count;
  const double dt = config_.waypoint_dt();
  const WorldPoint start = request.pose.position;
  const WorldPoint to_goal = request.goal - start;
  const double length = to_goal.norm();
  const WorldPoint dir = length > 0.0 ? WorldPoint(to_goal / length) : WorldPoint::Zero();
  TimedTrajectory traj;
  traj.positions.resize(2, n);
  traj.times.resize(n);
  for (int i = 0; i < n; ++i) {
    traj.times(i) = i * dt;
    traj.positions.col(i) = start + std::min(i * dt * cap, length) * dir;
  }
  return traj;
}

TimedTrajectory LocalPlanner::path_seed(const std::vector<WorldPoint>& path, double cap) const {
  const int n = config_.waypoint_count;
  const double dt = config_.waypoint_dt();
  TimedTrajectory traj;
  traj.positions.resize(2, n);
  traj.times.resize(n);
  std::size_t seg = 0;
  double seg_start = 0.0;
  for (int i = 0; i < n; ++i) {
    traj.times(i) = i * dt;
    const double s = i * dt * cap;
    while (seg + 1 < path.size() && seg_start + (path[seg + 1] - path[seg]).norm() < s) {
      seg_start += (path[seg + 1] - path[seg]).norm();
      ++seg;
    }
    if (seg + 1 >= path.size()) {
      traj.positions.col(i) = path.back();
    } else {
      const double len = (path[seg + 1] - path[seg]).norm();
      const double f = len > 0.0 ? std::clamp((s - seg_start) / len, 0.0, 1.0) : 0.0;
      traj.positions.col(i) = (1.0 - f) * path[seg] + f * path[seg + 1];
    }
  }
  return traj;
}

TimedTrajectory LocalPlanner::seed(const PlanRequest& request) const {
  const double cap = speed_cap(request.directive);
  const WorldPoint start = request.pose.position;

  std::optional<TimedTrajectory> fresh;
  if (footprint_clear(start, request.goal)) {
    fresh = straight_seed(request, cap);
  } else {
    const auto path = shortest_path(start, request.goal);
    if (!path.empty()) fresh = path_seed(path, cap);
  }
  if (fresh) project_speed(*fresh, cap);

  if (request.previous == nullptr || request.previous->size() != config_.waypoint_count) {
    if (!fresh) throw PlanningFailure("no collision-free seed toward the goal");
    return *fresh;
  }

  const TimedTrajectory& prev = *request.previous;
  const int n = config_.waypoint_count;
  const double dt = config_.waypoint_dt();
  TimedTrajectory warm;
  warm.positions.resize(2, n);
  warm.times.resize(n);
  const WorldPoint tail = prev.point(prev.size() - 1);
  const WorldPoint to_goal = request.goal - tail;
  const double remaining = to_goal.norm();
  for (int i = 0; i < n; ++i) {
    warm.times(i) = i * dt;
    const double t = i * dt + request.elapsed;
    if (t <= prev.duration()) {
      warm.positions.col(i) = prev.position_at(t);
    } else {
      const double extra = std::min((t - prev.duration()) * cap, remaining);
      warm.positions.col(i) = remaining > 0.0 ? WorldPoint(tail + to_goal * (extra / remaining)) : tail;
    }
  }
  warm.positions.col(0) = start;
  project_speed(warm, cap);
  if (fresh && objective(*fresh, request) < objective(warm, request)) return *fresh;
  return warm;
}

ObjectiveBreakdown LocalPlanner::objective_terms(const TimedTrajectory& traj,
                                                 const PlanRequest& request) const {
  const auto& w = config_.weights;
  const int n = traj.size();
  ObjectiveBreakdown out;
  out.goal = w.goal * (traj.point(n - 1) - request.goal).squaredNorm();
  for (int i = 1; i < n; ++i) {
    const WorldPoint p = traj.point(i);
    out.progress += w.progress * pseudo_huber((p - request.goal).squaredNorm());
    out.obstacle += w.obstacle * inverse_clearance(field_.distance(p) - config_.robot_radius,
                                                   config_.obstacle_clearance);
    for (const auto& h : request.visible) {
      const WorldPoint predicted = h.position + h.velocity * traj.times(i);
      out.visible += w.visible * inverse_clearance((p - predicted).norm() - config_.robot_radius,
                                                   config_.visible_clearance);
    }
  }
  for (int i = 1; i < n; ++i) {
    const double dt = traj.times(i) - traj.times(i - 1);
    const double e = goalward_advance(traj.point(i - 1), traj.point(i), request.goal).value / dt -
                     reference_speed(request, traj, i);
    out.speed += w.speed * e * e;
  }
  for (int i = 1; i + 1 < n; ++i)
    out.smoothness += w.smoothness *
                      (traj.positions.col(i - 1) - 2.0 * traj.positions.col(i) + traj.positions.col(i + 1))
                          .squaredNorm();
  const double w_inv = invisible_weight(request);
  if (w_inv > 0.0 && !request.invisible.empty()) {
    InvisibleCostParams params = config_.invisible_model;
    params.weight = w_inv;
    out.invisible = trajectory_cost(traj, request.invisible, params);
  }
  return out;
}

double LocalPlanner::objective(const TimedTrajectory& traj, const PlanRequest& request) const {
  return objective_terms(traj, request).total();
}

Eigen::Matrix2Xd LocalPlanner::objective_gradient(const TimedTrajectory& traj,
                                                  const PlanRequest& request) const {
  const auto& w = config_.weights;
  const int n = traj.size();
  Eigen::Matrix2Xd grad = Eigen::Matrix2Xd::Zero(2, n);
  grad.col(n - 1) += 2.0 * w.goal * (traj.point(n - 1) - request.goal);
  for (int i = 1; i < n; ++i) {
    const WorldPoint p = traj.point(i);
    const WorldPoint r = p - request.goal;
    grad.col(i) += w.progress * r / std::sqrt(r.squaredNorm() + kProgressSoftening * kProgressSoftening);

    WorldPoint field_grad;
    const double clearance = field_.distance(p, field_grad) - config_.robot_radius;
    grad.col(i) += w.obstacle * inverse_clearance_slope(clearance, config_.obstacle_clearance) * field_grad;

    for (const auto& h : request.visible) {
      const WorldPoint rel = p - (h.position + h.velocity * traj.times(i));
      const double d = rel.norm();
      if (d <= 0.0) continue;
      grad.col(i) += w.visible *
                     inverse_clearance_slope(d - config_.robot_radius, config_.visible_clearance) *
                     (rel / d);
    }
  }
  for (int i = 1; i < n; ++i) {
    const double dt = traj.times(i) - traj.times(i - 1);
    const Advance adv = goalward_advance(traj.point(i - 1), traj.point(i), request.goal);
    const double scale = 2.0 * w.speed * (adv.value / dt - reference_speed(request, traj, i)) / dt;
    grad.col(i - 1) += scale * adv.d_from;
    grad.col(i) += scale * adv.d_to;
  }
  for (int i = 1; i + 1 < n; ++i) {
    const WorldPoint a =
        traj.positions.col(i - 1) - 2.0 * traj.positions.col(i) + traj.positions.col(i + 1);
    grad.col(i - 1) += 2.0 * w.smoothness * a;
    grad.col(i) -= 4.0 * w.smoothness * a;
    grad.col(i + 1) += 2.0 * w.smoothness * a;
  }
  const double w_inv = invisible_weight(request);
  if (w_inv > 0.0 && !request.invisible.empty()) {
    InvisibleCostParams params = config_.invisible_model;
    params.weight = w_inv;
    grad += trajectory_cost_gradient(traj, request.invisible, params);
  }
  return grad;
}

TimedTrajectory LocalPlanner::optimize(const PlanRequest& request) const {
  const double cap = speed_cap(request.directive);
  TimedTrajectory traj = seed(request);
  double value = objective(traj, request);
  const WorldPoint anchor = traj.point(0);

  for (int it = 0; it < config_.iterations; ++it) {
    Eigen::Matrix2Xd grad = objective_gradient(traj, request);
    grad.col(0).setZero();
    if (grad.colwise().norm().maxCoeff() < 1e-12) break;

    bool improved = false;
    double scale = 1.0;
    for (int attempt = 0; attempt < kBacktrackSteps && !improved; ++attempt, scale *= 0.5) {
      TimedTrajectory candidate = traj;
      const double clip = scale * config_.max_waypoint_step;
      for (int i = 1; i < traj.size(); ++i) {
        WorldPoint move = -scale * kGradientGain * grad.col(i);
        const double len = move.norm();
        if (len > clip) move *= clip / len;
        candidate.positions.col(i) += move;
      }
      candidate.positions.col(0) = anchor;
      project_speed(candidate, cap);
      const double candidate_value = objective(candidate, request);
      if (candidate_value < value) {
        traj = std::move(candidate);
        value = candidate_value;
        improved = true;
      }
    }
    if (!improved) break;
  }
  return traj;
}

std::vector<WorldPoint> LocalPlanner::shortest_path(const WorldPoint& from, const WorldPoint& to) const {
  const int w = grid_.width();
  const int h = grid_.height();
  const CellIndex start = grid_.world_to_cell(from);
  const CellIndex goal = grid_.world_to_cell(to);
  if (!grid_.in_bounds(start.x(), start.y()) || !grid_.in_bounds(goal.x(), goal.y())) return {};

  auto index = [w](int x, int y) { return static_cast<std::size_t>(y) * w + x; };
  auto passable = [&](int x, int y) {
    if (!grid_.in_bounds(x, y) || grid_.occupied(x, y)) return false;
    if ((x == start.x() && y == start.y()) || (x == goal.x() && y == goal.y())) return true;
    return field_.at_cell(x, y) >= config_.robot_radius;
  };

  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<double> cost(static_cast<std::size_t>(w) * h, inf);
  std::vector<std::int64_t> parent(cost.size(), -1);
  using Entry = std::pair<double, std::int64_t>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
  auto heuristic = [&](int x, int y) { return std::hypot(x - goal.x(), y - goal.y()); };

  cost[index(start.x(), start.y())] = 0.0;
  open.emplace(heuristic(start.x(), start.y()), static_cast<std::int64_t>(index(start.x(), start.y())));
  const std::size_t goal_index = index(goal.x(), goal.y());
  while (!open.empty()) {
    const auto [f, idx] = open.top();
    open.pop();
    const int x = static_cast<int>(idx % w);
    const int y = static_cast<int>(idx / w);
    const double g = cost[static_cast<std::size_t>(idx)];
    if (f > g + heuristic(x, y) + 1e-9) continue;
    if (static_cast<std::size_t>(idx) == goal_index) break;
    for (int dy = -1; dy <= 1; ++dy) {
      for (int dx = -1; dx <= 1; ++dx) {
        if (dx == 0 && dy == 0) continue;
        const int nx = x + dx;
        const int ny = y + dy;
        if (!passable(nx, ny)) continue;
        if (dx != 0 && dy != 0 && (!passable(x + dx, y) || !passable(x, y + dy))) continue;
        const double ng = g + ((dx != 0 && dy != 0) ? std::sqrt(2.0) : 1.0);
        const std::size_t ni = index(nx, ny);
        if (ng < cost[ni]) {
          cost[ni] = ng;
          parent[ni] = idx;
          open.emplace(ng + heuristic(nx, ny), static_cast<std::int64_t>(ni));
        }
      }
    }
  }
  if (cost[goal_index] == inf) return {};

  std::vector<WorldPoint> path;
  for (std::int64_t at = static_cast<std::int64_t>(goal_index); at >= 0; at = parent[static_cast<std::size_t>(at)])
    path.push_back(grid_.cell_center(static_cast<int>(at % w), static_cast<int>(at / w)));
  std::reverse(path.begin(), path.end());
  path.front() = from;
  path.back() = to;
  return path;
}

TimedTrajectory optimize_cycle(const LocalPlanner& planner, const PlanRequest& request) {
  return planner.optimize(request);
}

}  // namespace occnav
