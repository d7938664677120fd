#pragma once

#include "occnav/gridmap.hpp"
#include "occnav/scan.hpp"

#include <span>
#include <vector>

namespace occnav {

struct DetectionParams {
  double gap_threshold = 0.5;  // m, consecutive endpoints further apart than this form a gap
  double h_rad = 0.3;          // m, assumed human radius
  double epsilon = 0.15;       // m, offset on the human radius (h_rad / 2)
  double alpha = 0.2;          // walk step as a fraction of (h_rad + epsilon)
  int k = 10;                  // lateral probes per side
  double front_limit = 5.0;    // m
  /// Also require the whole h_rad disc to be free. Off = centre + lateral probes only.
  bool full_disc_check = true;

  double offset() const { return h_rad + epsilon; }
  double step() const { return alpha * offset(); }
  void validate() const;
};

enum class Side { Right, Left };

/// Endpoints of two consecutive rays whose separation exceeds the gap threshold.
/// v1 is the corner (the endpoint nearer the robot), v2 the far endpoint.
struct VertexPair {
  WorldPoint v1;
  WorldPoint v2;
  int index1 = 0;  // ray of v1
  int index2 = 0;  // ray of v2; |index1 - index2| == 1 modulo the ray count
  double separation = 0.0;
  /// Side of v1->v2 that lies outside the laser contour. Right when the corner is the
  /// lower-index ray (the contour edge runs v1->v2 anti-clockwise), Left otherwise.
  Side occluded_side = Side::Right;

  /// The same edge directed by increasing ray index; outside is always on its right.
  WorldPoint contour_from() const { return occluded_side == Side::Right ? v1 : v2; }
  WorldPoint contour_to() const { return occluded_side == Side::Right ? v2 : v1; }
};

struct InvisibleHuman {
  WorldPoint position;        // H
  double direction = 0.0;     // heading from H toward the robot
  WorldPoint source_corner;   // V1 of the originating pair
  double distance_to_robot = 0.0;
  VertexPair pair;            // the gap edge the walk ran along
  WorldPoint foot;            // P, foot of the perpendicular on the gap edge
};

std::vector<VertexPair> find_gap_pairs(const LaserScan& scan, const DetectionParams& params = {});

std::vector<WorldPoint> select_corners(std::span<const VertexPair> pairs);

/// Emergence candidate for foot point p on the pair's edge, on the occluded side.
WorldPoint emergence_point(const VertexPair& pair, const WorldPoint& p, double d);

/// ||r|| > rho(beta) with r from the scan pose to h.
bool is_outside_contour(const LaserScan& scan, const WorldPoint& h);

/// Acceptance test for a candidate H with foot P: centre free, the k lateral
/// probe pairs free and, when enabled, the full disc free.
bool candidate_fits(const OccupancyGrid& grid, const WorldPoint& foot, const WorldPoint& h,
                    const DetectionParams& params);

std::vector<InvisibleHuman> locate_invisible_humans(const OccupancyGrid& grid,
                                                    const LaserScan& scan,
                                                    std::span<const VertexPair> pairs,
                                                    const DetectionParams& params = {});

std::vector<InvisibleHuman> locate_invisible_humans(const OccupancyGrid& grid,
                                                    const LaserScan& scan,
                                                    const DetectionParams& params = {});

struct Detection {
  LaserScan scan;
  std::vector<VertexPair> pairs;
  std::vector<InvisibleHuman> humans;
};

/// simulate_scan -> find_gap_pairs -> locate_invisible_humans.
Detection detect(const OccupancyGrid& grid, const Pose2D& pose, const DetectionParams& params = {},
                 const ScanConfig& scan_config = {});

}  // namespace occnav
