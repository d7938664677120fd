#pragma once

#include "occnav/gridmap.hpp"
#include "occnav/random.hpp"

#include <vector>

namespace fixtures {

/// Random rectangles scattered over an otherwise free raster.
inline occnav::OccupancyGrid random_blocks(std::uint64_t seed, int width, int height,
                                           double resolution, int blocks, int max_side) {
  occnav::Rng rng(seed);
  occnav::MapBuilder b(width, height, resolution);
  for (int i = 0; i < blocks; ++i) {
    const int x0 = static_cast<int>(rng.index(static_cast<std::uint64_t>(width)));
    const int y0 = static_cast<int>(rng.index(static_cast<std::uint64_t>(height)));
    const int w = 1 + static_cast<int>(rng.index(static_cast<std::uint64_t>(max_side)));
    const int h = 1 + static_cast<int>(rng.index(static_cast<std::uint64_t>(max_side)));
    for (int y = y0; y < std::min(height, y0 + h); ++y)
      for (int x = x0; x < std::min(width, x0 + w); ++x) b.set_cell(x, y);
  }
  return b.build();
}

/// Uniform point inside the map box.
inline occnav::WorldPoint random_point(occnav::Rng& rng, const occnav::OccupancyGrid& g) {
  return g.origin() + occnav::WorldPoint(rng.uniform() * g.extent().x(), rng.uniform() * g.extent().y());
}

}  // namespace fixtures
