#include "occnav/scan.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <cmath>
#include <ostream>
#include <stdexcept>

namespace occnav {

bool ScanConfig::full_circle() const {
  return (angle_max - angle_min) + increment() >= 2.0 * std::numbers::pi - 1e-9;
}

void ScanConfig::validate() const {
  if (ray_count < 8) throw std::invalid_argument("scan: ray_count must be at least 8");
  if (!(angle_min < angle_max)) throw std::invalid_argument("scan: angle_min must be < angle_max");
  if ((angle_max - angle_min) + increment() > 2.0 * std::numbers::pi + 1e-9)
    throw std::invalid_argument("scan: field of view exceeds a full turn");
  if (!(max_range > 0.0)) throw std::invalid_argument("scan: max_range must be positive");
  if (!(front_limit > 0.0) || front_limit > max_range)
    throw std::invalid_argument("scan: front_limit must be in (0, max_range]");
}

WorldPoint LaserScan::endpoint(int index) const {
  return pose.position + ranges[static_cast<std::size_t>(index)] * direction_of(world_angle_of(index));
}

LaserScan simulate_scan(const OccupancyGrid& grid, const Pose2D& pose, const ScanConfig& config) {
  config.validate();
  if (is_occupied(grid, pose.position))
    throw std::invalid_argument("simulate_scan: pose lies in an occupied cell");
  LaserScan scan{pose, config, {}};
  scan.ranges.resize(static_cast<std::size_t>(config.ray_count));
  for (int i = 0; i < config.ray_count; ++i)
    scan.ranges[static_cast<std::size_t>(i)] =
        raycast(grid, pose.position, pose.heading + config.angle_of(i), config.max_range);
  return scan;
}

int nearest_ray(const LaserScan& scan, double beta) {
  const ScanConfig& cfg = scan.config;
  const double inc = cfg.increment();
  constexpr double two_pi = 2.0 * std::numbers::pi;
  // Offset from angle_min, wrapped into [0, 2pi).
  double offset = std::fmod(beta - cfg.angle_min, two_pi);
  if (offset < 0.0) offset += two_pi;
  const double span = cfg.angle_max - cfg.angle_min;
  if (cfg.full_circle()) {
    const double position = offset / inc;
    int index = static_cast<int>(std::ceil(position - 0.5));
    if (index >= cfg.ray_count) index -= cfg.ray_count;
    return index;
  }
  if (offset > span)
    throw std::out_of_range("range_at_angle: bearing outside the scan field of view");
  return static_cast<int>(std::ceil(offset / inc - 0.5));
}

double range_at_angle(const LaserScan& scan, double beta) {
  return scan.ranges[static_cast<std::size_t>(nearest_ray(scan, beta))];
}

void write_scan_csv(const LaserScan& scan, std::ostream& out) {
  out << "index,angle_rad,range_m\n";
  for (int i = 0; i < scan.size(); ++i)
    fmt::print(out, "{},{:.9f},{:.9f}\n", i, scan.angle_of(i), scan.ranges[static_cast<std::size_t>(i)]);
}

}  // namespace occnav
