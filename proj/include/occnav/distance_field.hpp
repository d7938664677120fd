#pragma once

#include "occnav/gridmap.hpp"

#include <Eigen/Core>

namespace occnav {

/// Clearance to the nearest occupied (or off-map) cell, sampled at cell centres and
/// bilinearly interpolated. Built once per map; queries are pure.
class DistanceField {
 public:
  explicit DistanceField(const OccupancyGrid& grid);

  /// Interpolated clearance in meters (0 inside obstacles).
  double distance(const WorldPoint& p) const;
  /// Clearance and its spatial gradient (exact derivative of the bilinear patch).
  double distance(const WorldPoint& p, WorldPoint& gradient) const;

  double at_cell(int cx, int cy) const;

 private:
  int width_;
  int height_;
  double resolution_;
  WorldPoint origin_;
  // (width+2) x (height+2) samples; the outer ring is the off-map obstacle border.
  Eigen::MatrixXd samples_;
};

}  // namespace occnav
