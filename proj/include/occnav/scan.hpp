#pragma once

#include "occnav/gridmap.hpp"

#include <iosfwd>
#include <numbers>
#include <vector>

namespace occnav {

/// Emulated planar range sensor. Angles are in the robot frame; ray i sits at
/// angle_min + i * increment(), increasing anti-clockwise.
struct ScanConfig {
  int ray_count = 720;
  double angle_min = -std::numbers::pi;
  double angle_max = std::numbers::pi - 2.0 * std::numbers::pi / 720.0;
  double max_range = 7.0;
  double front_limit = 5.0;

  double increment() const { return (angle_max - angle_min) / (ray_count - 1); }
  double angle_of(int index) const { return angle_min + index * increment(); }
  /// Rays cover the whole circle (the last ray is one increment short of the first).
  bool full_circle() const;
  void validate() const;
};

struct LaserScan {
  Pose2D pose;
  ScanConfig config;
  std::vector<double> ranges;

  int size() const { return static_cast<int>(ranges.size()); }
  double angle_of(int index) const { return config.angle_of(index); }
  double world_angle_of(int index) const { return pose.heading + config.angle_of(index); }
  WorldPoint endpoint(int index) const;
};

LaserScan simulate_scan(const OccupancyGrid& grid, const Pose2D& pose,
                        const ScanConfig& config = {});

/// Index of the ray nearest to beta (robot frame); ties go to the lower index.
/// Throws std::out_of_range when beta is outside a partial field of view.
int nearest_ray(const LaserScan& scan, double beta);

/// rho(beta): nearest-ray range, no interpolation.
double range_at_angle(const LaserScan& scan, double beta);

/// CSV with header `index,angle_rad,range_m`.
void write_scan_csv(const LaserScan& scan, std::ostream& out);

}  // namespace occnav
