#include "occnav/trajectory.hpp"

#include <stdexcept>

namespace occnav {

Pose2D TimedTrajectory::pose(int i) const {
  const int n = size();
  WorldPoint d = WorldPoint::Zero();
  if (n > 1) d = i + 1 < n ? WorldPoint(point(i + 1) - point(i)) : WorldPoint(point(i) - point(i - 1));
  const double heading = d.squaredNorm() > 0.0 ? std::atan2(d.y(), d.x()) : 0.0;
  return {point(i), heading};
}

Eigen::VectorXd TimedTrajectory::segment_speeds() const {
  const int n = size();
  Eigen::VectorXd speeds(std::max(n - 1, 0));
  for (int i = 0; i + 1 < n; ++i)
    speeds(i) = (positions.col(i + 1) - positions.col(i)).norm() / (times(i + 1) - times(i));
  return speeds;
}

WorldPoint TimedTrajectory::position_at(double t) const {
  const int n = size();
  if (t <= times(0)) return point(0);
  for (int i = 0; i + 1 < n; ++i) {
    if (t <= times(i + 1)) {
      const double f = (t - times(i)) / (times(i + 1) - times(i));
      return (1.0 - f) * positions.col(i) + f * positions.col(i + 1);
    }
  }
  return point(n - 1);
}

void TimedTrajectory::validate() const {
  if (positions.cols() == 0 || positions.cols() != times.size())
    throw std::invalid_argument("trajectory: positions and times must be non-empty and aligned");
  if (times(0) != 0.0) throw std::invalid_argument("trajectory: time offsets must start at 0");
  for (Eigen::Index i = 1; i < times.size(); ++i)
    if (!(times(i) > times(i - 1)))
      throw std::invalid_argument("trajectory: time offsets must strictly increase");
  if (!positions.allFinite()) throw std::invalid_argument("trajectory: non-finite waypoint");
}

TimedTrajectory TimedTrajectory::uniform(const WorldPoint& from, const WorldPoint& to, int count,
                                         double horizon) {
  if (count < 2 || !(horizon > 0.0)) throw std::invalid_argument("trajectory: bad uniform layout");
  TimedTrajectory traj;
  traj.positions.resize(2, count);
  traj.times.resize(count);
  for (int i = 0; i < count; ++i) {
    const double f = static_cast<double>(i) / (count - 1);
    traj.positions.col(i) = (1.0 - f) * from + f * to;
    traj.times(i) = f * horizon;
  }
  return traj;
}

}  // namespace occnav
