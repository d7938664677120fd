#include "occnav/detect.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <stdexcept>

namespace occnav {

void DetectionParams::validate() const {
  if (!(gap_threshold > 0.0) || !(h_rad > 0.0) || !(epsilon > 0.0) || !(alpha > 0.0) ||
      !(front_limit > 0.0))
    throw std::invalid_argument("detection parameters must be positive");
  if (k < 1) throw std::invalid_argument("detection parameter k must be >= 1");
}

std::vector<VertexPair> find_gap_pairs(const LaserScan& scan, const DetectionParams& params) {
  params.validate();
  std::vector<VertexPair> pairs;
  const int n = scan.size();
  // Full-circle scans also pair the last ray with the first.
  const int last = scan.config.full_circle() ? n : n - 1;
  const double half_pi = std::numbers::pi / 2.0;
  for (int i = 0; i < last; ++i) {
    const int j = (i + 1) % n;
    const WorldPoint a = scan.endpoint(i);
    const WorldPoint b = scan.endpoint(j);
    const double separation = (b - a).norm();
    if (!(separation > params.gap_threshold)) continue;

    const bool corner_first = scan.ranges[static_cast<std::size_t>(i)] <=
                              scan.ranges[static_cast<std::size_t>(j)];
    VertexPair pair;
    pair.v1 = corner_first ? a : b;
    pair.v2 = corner_first ? b : a;
    pair.index1 = corner_first ? i : j;
    pair.index2 = corner_first ? j : i;
    pair.separation = separation;
    pair.occluded_side = corner_first ? Side::Right : Side::Left;

    const double corner_range = scan.ranges[static_cast<std::size_t>(pair.index1)];
    const double bearing = normalize_angle(scan.angle_of(pair.index1));
    if (corner_range > params.front_limit || std::abs(bearing) > half_pi) continue;
    pairs.push_back(pair);
  }
  return pairs;
}

std::vector<WorldPoint> select_corners(std::span<const VertexPair> pairs) {
  std::vector<WorldPoint> corners;
  corners.reserve(pairs.size());
  for (const auto& pair : pairs) corners.push_back(pair.v1);
  return corners;
}

WorldPoint emergence_point(const VertexPair& pair, const WorldPoint& p, double d) {
  return pair.occluded_side == Side::Right ? offset_right(pair.v1, pair.v2, p, d)
                                           : offset_left(pair.v1, pair.v2, p, d);
}

bool is_outside_contour(const LaserScan& scan, const WorldPoint& h) {
  const WorldPoint r = h - scan.pose.position;
  const double beta = normalize_angle(std::atan2(r.y(), r.x()) - scan.pose.heading);
  return r.norm() > range_at_angle(scan, beta);
}

bool candidate_fits(const OccupancyGrid& grid, const WorldPoint& foot, const WorldPoint& h,
                    const DetectionParams& params) {
  if (is_occupied(grid, h)) return false;
  // The probes straddle H along the gap-edge direction, i.e. perpendicular to P->H.
  if ((h - foot).norm() > 0.0) {
    for (int i = 1; i <= params.k; ++i) {
      const double d = static_cast<double>(i) / params.k * params.offset();
      if (is_occupied(grid, offset_right(foot, h, h, d)) ||
          is_occupied(grid, offset_left(foot, h, h, d)))
        return false;
    }
  }
  return !params.full_disc_check || !circle_overlaps(grid, h, params.h_rad);
}

namespace {

std::optional<InvisibleHuman> walk_gap_edge(const OccupancyGrid& grid, const LaserScan& scan,
                                            const VertexPair& pair, const DetectionParams& params) {
  const WorldPoint u = (pair.v2 - pair.v1) / pair.separation;
  const double step = params.step();
  for (long n = 0;; ++n) {
    const double s = static_cast<double>(n) * step;
    if (s > pair.separation) return std::nullopt;
    const WorldPoint foot = pair.v1 + s * u;
    const WorldPoint h = emergence_point(pair, foot, params.offset());
    if (!is_outside_contour(scan, h)) continue;
    if (!candidate_fits(grid, foot, h, params)) continue;

    InvisibleHuman human;
    human.position = h;
    const WorldPoint to_robot = scan.pose.position - h;
    human.direction = std::atan2(to_robot.y(), to_robot.x());
    human.source_corner = pair.v1;
    human.distance_to_robot = to_robot.norm();
    human.pair = pair;
    human.foot = foot;
    return human;
  }
}

}  // namespace

std::vector<InvisibleHuman> locate_invisible_humans(const OccupancyGrid& grid,
                                                    const LaserScan& scan,
                                                    std::span<const VertexPair> pairs,
                                                    const DetectionParams& params) {
  params.validate();
  // Walks are independent per corner; keep them in corner-index order.
  std::vector<const VertexPair*> ordered;
  for (const auto& pair : pairs) ordered.push_back(&pair);
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const VertexPair* a, const VertexPair* b) { return a->index1 < b->index1; });

  std::vector<InvisibleHuman> found;
  for (const VertexPair* pair : ordered) {
    if (auto human = walk_gap_edge(grid, scan, *pair, params)) found.push_back(*human);
  }

  // Merge: nearer-to-robot detections win against anything within h_rad of them.
  std::vector<std::size_t> by_distance(found.size());
  std::iota(by_distance.begin(), by_distance.end(), std::size_t{0});
  std::stable_sort(by_distance.begin(), by_distance.end(), [&](std::size_t a, std::size_t b) {
    return found[a].distance_to_robot < found[b].distance_to_robot;
  });
  std::vector<bool> keep(found.size(), false);
  for (std::size_t idx : by_distance) {
    bool clear = true;
    for (std::size_t other = 0; other < found.size(); ++other) {
      if (keep[other] && (found[other].position - found[idx].position).norm() < params.h_rad) {
        clear = false;
        break;
      }
    }
    keep[idx] = clear;
  }
  std::vector<InvisibleHuman> merged;
  for (std::size_t i = 0; i < found.size(); ++i)
    if (keep[i]) merged.push_back(found[i]);
  return merged;
}

std::vector<InvisibleHuman> locate_invisible_humans(const OccupancyGrid& grid,
                                                    const LaserScan& scan,
                                                    const DetectionParams& params) {
  const auto pairs = find_gap_pairs(scan, params);
  return locate_invisible_humans(grid, scan, pairs, params);
}

Detection detect(const OccupancyGrid& grid, const Pose2D& pose, const DetectionParams& params,
                 const ScanConfig& scan_config) {
  Detection out;
  out.scan = simulate_scan(grid, pose, scan_config);
  out.pairs = find_gap_pairs(out.scan, params);
  out.humans = locate_invisible_humans(grid, out.scan, out.pairs, params);
  return out;
}

}  // namespace occnav
