#pragma once

#include "occnav/gridmap.hpp"

#include <cstdint>

namespace occnav {

/// Recursive-division maze on a lattice of corridor cells separated by one-cell walls.
/// width/height are raster cells; corridor_width is metres. Cells past the last full
/// lattice row/column stay occupied. Free space is connected.
OccupancyGrid generate_maze(std::uint64_t seed, int width, int height, double corridor_width,
                            double resolution = 0.1);

}  // namespace occnav
