#pragma once

#include "occnav/detect.hpp"
#include "occnav/scenario.hpp"

#include <span>
#include <string>

namespace occnav {

struct RenderInput {
  const OccupancyGrid* map = nullptr;       // optional
  std::span<const RecordRow> path;          // executed path, in time order
  std::span<const InvisibleHuman> detections;
  std::optional<Pose2D> robot;
  double pixels_per_metre = 50.0;
};

/// Standalone SVG: occupied cells, the path as one polyline plus time-coloured vertex dots
/// (blue at the start, red at the end), detections as a circle and a heading arrow each.
std::string render_svg(const RenderInput& input);

}  // namespace occnav
