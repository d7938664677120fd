#include "occnav/cost.hpp"

#include <algorithm>
#include <stdexcept>

namespace occnav {

void InvisibleCostParams::validate() const {
  if (!(walking_speed > 0.0)) throw std::invalid_argument("invisible cost: walking speed must be positive");
  if (!(deceleration >= 0.0 && deceleration <= 2.94))
    throw std::invalid_argument("invisible cost: deceleration must lie in [0, 2.94]");
  if (!(reaction_time >= 0.0)) throw std::invalid_argument("invisible cost: negative reaction time");
  if (!(weight >= 0.0)) throw std::invalid_argument("invisible cost: negative weight");
}

namespace {

// Numerator of the cost: the speed the human is still assumed to approach with.
double approach_speed(double dt, const InvisibleCostParams& p) {
  if (dt <= p.reaction_time) return p.walking_speed;
  const double braking_time = p.decelerate_after_reaction ? dt - p.reaction_time : dt;
  return std::max(p.walking_speed - p.deceleration * braking_time, 0.0);
}

void check_args(double d, double dt) {
  if (!(d > 0.0)) throw std::invalid_argument("invisible cost: distance must be positive");
  if (!(dt >= 0.0)) throw std::invalid_argument("invisible cost: negative time offset");
}

}  // namespace

double invisible_cost(double d, double dt, const InvisibleCostParams& params) {
  check_args(d, dt);
  return approach_speed(dt, params) / d;
}

double invisible_cost_slope(double d, double dt, const InvisibleCostParams& params) {
  check_args(d, dt);
  return -approach_speed(dt, params) / (d * d);
}

double trajectory_cost(const TimedTrajectory& traj, std::span<const WorldPoint> humans,
                       const InvisibleCostParams& params) {
  traj.validate();
  params.validate();
  double total = 0.0;
  for (int n = 0; n < traj.size(); ++n) {
    const WorldPoint p = traj.point(n);
    for (const auto& h : humans) {
      const double d = std::max((p - h).norm(), InvisibleCostParams::distance_floor);
      total += invisible_cost(d, traj.times(n), params);
    }
  }
  return params.weight * total;
}

double trajectory_cost(const TimedTrajectory& traj, std::span<const InvisibleHuman> humans,
                       const InvisibleCostParams& params) {
  const auto points = positions_of(humans);
  return trajectory_cost(traj, points, params);
}

Eigen::Matrix2Xd trajectory_cost_gradient(const TimedTrajectory& traj,
                                          std::span<const WorldPoint> humans,
                                          const InvisibleCostParams& params) {
  traj.validate();
  params.validate();
  Eigen::Matrix2Xd grad = Eigen::Matrix2Xd::Zero(2, traj.size());
  for (int n = 0; n < traj.size(); ++n) {
    const WorldPoint p = traj.point(n);
    for (const auto& h : humans) {
      const WorldPoint r = p - h;
      const double d = r.norm();
      if (d <= InvisibleCostParams::distance_floor) continue;  // clamped: locally constant
      grad.col(n) += params.weight * invisible_cost_slope(d, traj.times(n), params) * (r / d);
    }
  }
  return grad;
}

std::vector<WorldPoint> positions_of(std::span<const InvisibleHuman> humans) {
  std::vector<WorldPoint> points;
  points.reserve(humans.size());
  for (const auto& h : humans) points.push_back(h.position);
  return points;
}

}  // namespace occnav
