#include "occnav/maze.hpp"

#include "occnav/random.hpp"

#include <cmath>
#include <stdexcept>

namespace occnav {

namespace {

struct Carver {
  int width;
  int pitch;  // corridor cells + 1 wall cell
  std::vector<std::uint8_t>& cells;
  Rng& rng;

  void set(int x, int y, std::uint8_t v) { cells[static_cast<std::size_t>(y) * width + x] = v; }

  // Region in lattice units: maze cells [x0, x1) x [y0, y1).
  void divide(int x0, int y0, int x1, int y1) {
    const int w = x1 - x0;
    const int h = y1 - y0;
    if (w < 2 || h < 2) return;
    const bool horizontal = h > w || (h == w && rng.index(2) == 0);
    if (horizontal) {
      const int k = y0 + 1 + static_cast<int>(rng.index(static_cast<std::uint64_t>(h - 1)));
      const int gap = x0 + static_cast<int>(rng.index(static_cast<std::uint64_t>(w)));
      const int row = k * pitch;
      for (int x = x0 * pitch; x <= x1 * pitch; ++x) set(x, row, 1);
      for (int x = gap * pitch + 1; x < (gap + 1) * pitch; ++x) set(x, row, 0);
      divide(x0, y0, x1, k);
      divide(x0, k, x1, y1);
    } else {
      const int k = x0 + 1 + static_cast<int>(rng.index(static_cast<std::uint64_t>(w - 1)));
      const int gap = y0 + static_cast<int>(rng.index(static_cast<std::uint64_t>(h)));
      const int col = k * pitch;
      for (int y = y0 * pitch; y <= y1 * pitch; ++y) set(col, y, 1);
      for (int y = gap * pitch + 1; y < (gap + 1) * pitch; ++y) set(col, y, 0);
      divide(x0, y0, k, y1);
      divide(k, y0, x1, y1);
    }
  }
};

}  // namespace

OccupancyGrid generate_maze(std::uint64_t seed, int width, int height, double corridor_width,
                            double resolution) {
  if (width <= 0 || height <= 0 || !(resolution > 0.0) || !(corridor_width > 0.0))
    throw std::invalid_argument("maze: dimensions must be positive");
  const int corridor = std::max(1, static_cast<int>(std::lround(corridor_width / resolution)));
  const int pitch = corridor + 1;
  const int nx = (width - 1) / pitch;
  const int ny = (height - 1) / pitch;
  if (nx < 1 || ny < 1) throw std::invalid_argument("maze: grid too small for one corridor cell");

  std::vector<std::uint8_t> cells(static_cast<std::size_t>(width) * height, 1);
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i)
      for (int y = j * pitch + 1; y < (j + 1) * pitch; ++y)
        for (int x = i * pitch + 1; x < (i + 1) * pitch; ++x)
          cells[static_cast<std::size_t>(y) * width + x] = 0;
  // Open the lattice lines inside the maze; division puts walls back.
  for (int y = 1; y < ny * pitch; ++y)
    for (int x = 1; x < nx * pitch; ++x)
      cells[static_cast<std::size_t>(y) * width + x] = 0;

  Rng rng(seed);
  Carver carver{width, pitch, cells, rng};
  carver.divide(0, 0, nx, ny);
  return OccupancyGrid(width, height, resolution, WorldPoint::Zero(), std::move(cells));
}

}  // namespace occnav
