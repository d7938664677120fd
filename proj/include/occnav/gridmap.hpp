#pragma once

#include "occnav/geometry.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace occnav {

class MapError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using CellIndex = Eigen::Vector2i;

/// Binary occupancy raster. Cell (0,0) spans [origin, origin + resolution) on both axes;
/// rows grow with y. Immutable after construction.
class OccupancyGrid {
 public:
  OccupancyGrid(int width, int height, double resolution, WorldPoint origin,
                std::vector<std::uint8_t> cells);

  int width() const { return width_; }
  int height() const { return height_; }
  double resolution() const { return resolution_; }
  const WorldPoint& origin() const { return origin_; }
  WorldPoint extent() const { return {width_ * resolution_, height_ * resolution_}; }
  WorldPoint max_corner() const { return origin_ + extent(); }

  bool in_bounds(int cx, int cy) const { return cx >= 0 && cy >= 0 && cx < width_ && cy < height_; }
  /// Out-of-bounds cells report occupied.
  bool occupied(int cx, int cy) const {
    return !in_bounds(cx, cy) || cells_[static_cast<std::size_t>(cy) * width_ + cx] != 0;
  }
  bool occupied(const CellIndex& c) const { return occupied(c.x(), c.y()); }

  CellIndex world_to_cell(const WorldPoint& p) const;
  WorldPoint cell_center(int cx, int cy) const;
  WorldPoint cell_min_corner(int cx, int cy) const;

  const std::vector<std::uint8_t>& cells() const { return cells_; }
  std::size_t occupied_count() const;
  /// FNV-1a over dimensions and cells; layout fingerprint.
  std::uint64_t fingerprint() const;

 private:
  int width_;
  int height_;
  double resolution_;
  WorldPoint origin_;
  std::vector<std::uint8_t> cells_;
};

/// Mutable raster used to author maps; produces an OccupancyGrid.
class MapBuilder {
 public:
  MapBuilder(int width, int height, double resolution, WorldPoint origin = WorldPoint::Zero());

  /// Marks every cell whose centre lies in the axis-aligned world rectangle.
  MapBuilder& fill_rect(const WorldPoint& lo, const WorldPoint& hi, bool occupied = true);
  MapBuilder& fill_disc(const WorldPoint& center, double radius, bool occupied = true);
  MapBuilder& set_cell(int cx, int cy, bool occupied = true);
  MapBuilder& border();

  OccupancyGrid build() const;

 private:
  int width_;
  int height_;
  double resolution_;
  WorldPoint origin_;
  std::vector<std::uint8_t> cells_;
};

OccupancyGrid parse_ascii_map(std::istream& in);
void write_ascii_map(const OccupancyGrid& grid, std::ostream& out);

/// 8-bit P5 graymap; pixels darker than half of maxval are occupied. The first pixel row is
/// the top (largest y) of the map.
OccupancyGrid parse_pgm_map(std::istream& pgm, double resolution, const WorldPoint& origin);
void write_pgm_map(const OccupancyGrid& grid, std::ostream& out);

/// Loads either format. A file starting with "P5" is a graymap and needs the sidecar
/// `<stem>.yaml` carrying `resolution`, `origin_x`, `origin_y`.
OccupancyGrid load_map(const std::filesystem::path& source);
void save_map(const OccupancyGrid& grid, const std::filesystem::path& target);

bool is_occupied(const OccupancyGrid& grid, const WorldPoint& p);

/// True iff some occupied (or off-map) cell's box touches the closed disc.
bool circle_overlaps(const OccupancyGrid& grid, const WorldPoint& center, double radius);

/// Exact cell walk from origin; returns the entry distance into the first occupied cell,
/// max_range when nothing is hit, 0 when origin itself is occupied.
double raycast(const OccupancyGrid& grid, const WorldPoint& origin, double angle, double max_range);

/// True when the straight segment a->b enters no occupied cell.
bool segment_clear(const OccupancyGrid& grid, const WorldPoint& a, const WorldPoint& b);

}  // namespace occnav
