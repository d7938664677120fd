#pragma once

#include "occnav/geometry.hpp"

#include <Eigen/Core>

namespace occnav {

/// Waypoints with time offsets from the start of the plan. Column i of `positions` is
/// reached at `times(i)`; times(0) == 0 and times strictly increase.
struct TimedTrajectory {
  Eigen::Matrix2Xd positions;
  Eigen::VectorXd times;

  int size() const { return static_cast<int>(positions.cols()); }
  WorldPoint point(int i) const { return positions.col(i); }
  /// Heading along the outgoing segment (incoming for the last waypoint).
  Pose2D pose(int i) const;
  /// Speed over each segment, size() - 1 entries.
  Eigen::VectorXd segment_speeds() const;
  /// Piecewise-linear position; clamps outside [0, times(last)].
  WorldPoint position_at(double t) const;
  double duration() const { return times(times.size() - 1); }

  /// Throws std::invalid_argument on mismatched sizes or non-monotone time.
  void validate() const;

  static TimedTrajectory uniform(const WorldPoint& from, const WorldPoint& to, int count,
                                 double horizon);
};

}  // namespace occnav
