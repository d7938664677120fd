#pragma once

#include "occnav/detect.hpp"
#include "occnav/trajectory.hpp"

#include <span>

namespace occnav {

/// Human model behind the invisible-humans cost.
struct InvisibleCostParams {
  double walking_speed = 1.3;  // V, m/s
  double deceleration = 2.94;  // a, m/s^2 (0.3 g upper bound)
  double reaction_time = 0.5;  // s
  double weight = 1.0;
  /// Decelerate over (dt - reaction_time) instead of the full dt.
  bool decelerate_after_reaction = false;

  static constexpr double distance_floor = 1e-3;  // m; callers clamp d to this
  void validate() const;
};

/// V/d while dt <= reaction_time, max((V - a*dt)/d, 0) afterwards.
double invisible_cost(double d, double dt, const InvisibleCostParams& params = {});

/// d/dd of invisible_cost at fixed dt.
double invisible_cost_slope(double d, double dt, const InvisibleCostParams& params = {});

/// weight * sum over waypoints n and humans h of invisible_cost(|p_n - h|, t_n).
double trajectory_cost(const TimedTrajectory& traj, std::span<const WorldPoint> humans,
                       const InvisibleCostParams& params = {});
double trajectory_cost(const TimedTrajectory& traj, std::span<const InvisibleHuman> humans,
                       const InvisibleCostParams& params = {});

/// Gradient of trajectory_cost with respect to every waypoint position (2 x N).
Eigen::Matrix2Xd trajectory_cost_gradient(const TimedTrajectory& traj,
                                          std::span<const WorldPoint> humans,
                                          const InvisibleCostParams& params = {});

std::vector<WorldPoint> positions_of(std::span<const InvisibleHuman> humans);

}  // namespace occnav
