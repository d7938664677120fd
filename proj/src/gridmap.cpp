#include "occnav/gridmap.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace occnav {

OccupancyGrid::OccupancyGrid(int width, int height, double resolution, WorldPoint origin,
                             std::vector<std::uint8_t> cells)
    : width_(width), height_(height), resolution_(resolution), origin_(std::move(origin)),
      cells_(std::move(cells)) {
  if (width_ <= 0 || height_ <= 0) throw MapError("map dimensions must be positive");
  if (!(resolution_ > 0.0) || !std::isfinite(resolution_))
    throw MapError("map resolution must be positive");
  if (!origin_.allFinite()) throw MapError("map origin must be finite");
  if (cells_.size() != static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_))
    throw MapError("cell payload does not match map dimensions");
  for (auto& c : cells_) c = c != 0 ? 1 : 0;
}

CellIndex OccupancyGrid::world_to_cell(const WorldPoint& p) const {
  const WorldPoint local = (p - origin_) / resolution_;
  // Clamp before the integer cast so far-away points stay well defined (and off-map).
  constexpr double limit = 1e9;
  return {static_cast<int>(std::floor(std::clamp(local.x(), -limit, limit))),
          static_cast<int>(std::floor(std::clamp(local.y(), -limit, limit)))};
}

WorldPoint OccupancyGrid::cell_center(int cx, int cy) const {
  return origin_ + WorldPoint(cx + 0.5, cy + 0.5) * resolution_;
}

WorldPoint OccupancyGrid::cell_min_corner(int cx, int cy) const {
  return origin_ + WorldPoint(cx, cy) * resolution_;
}

std::size_t OccupancyGrid::occupied_count() const {
  return static_cast<std::size_t>(std::count(cells_.begin(), cells_.end(), std::uint8_t{1}));
}

std::uint64_t OccupancyGrid::fingerprint() const {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
      h ^= (v >> (8 * i)) & 0xffU;
      h *= 1099511628211ULL;
    }
  };
  mix(static_cast<std::uint64_t>(width_));
  mix(static_cast<std::uint64_t>(height_));
  for (auto c : cells_) mix(c);
  return h;
}

MapBuilder::MapBuilder(int width, int height, double resolution, WorldPoint origin)
    : width_(width), height_(height), resolution_(resolution), origin_(std::move(origin)) {
  if (width_ <= 0 || height_ <= 0) throw MapError("map dimensions must be positive");
  if (!(resolution_ > 0.0)) throw MapError("map resolution must be positive");
  cells_.assign(static_cast<std::size_t>(width_) * height_, 0);
}

MapBuilder& MapBuilder::set_cell(int cx, int cy, bool occupied) {
  if (cx >= 0 && cy >= 0 && cx < width_ && cy < height_)
    cells_[static_cast<std::size_t>(cy) * width_ + cx] = occupied ? 1 : 0;
  return *this;
}

MapBuilder& MapBuilder::fill_rect(const WorldPoint& lo, const WorldPoint& hi, bool occupied) {
  for (int cy = 0; cy < height_; ++cy) {
    const double y = origin_.y() + (cy + 0.5) * resolution_;
    if (y < lo.y() || y > hi.y()) continue;
    for (int cx = 0; cx < width_; ++cx) {
      const double x = origin_.x() + (cx + 0.5) * resolution_;
      if (x >= lo.x() && x <= hi.x()) set_cell(cx, cy, occupied);
    }
  }
  return *this;
}

MapBuilder& MapBuilder::fill_disc(const WorldPoint& center, double radius, bool occupied) {
  for (int cy = 0; cy < height_; ++cy) {
    for (int cx = 0; cx < width_; ++cx) {
      const WorldPoint c = origin_ + WorldPoint(cx + 0.5, cy + 0.5) * resolution_;
      if ((c - center).norm() <= radius) set_cell(cx, cy, occupied);
    }
  }
  return *this;
}

MapBuilder& MapBuilder::border() {
  for (int cx = 0; cx < width_; ++cx) {
    set_cell(cx, 0);
    set_cell(cx, height_ - 1);
  }
  for (int cy = 0; cy < height_; ++cy) {
    set_cell(0, cy);
    set_cell(width_ - 1, cy);
  }
  return *this;
}

OccupancyGrid MapBuilder::build() const {
  return OccupancyGrid(width_, height_, resolution_, origin_, cells_);
}

namespace {

std::string strip_cr(std::string line) {
  while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t'))
    line.pop_back();
  return line;
}

}  // namespace

OccupancyGrid parse_ascii_map(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) throw MapError("ascii map: missing header line");
  std::istringstream hs(header);
  long long width = 0;
  long long height = 0;
  double resolution = 0.0;
  double ox = 0.0;
  double oy = 0.0;
  if (!(hs >> width >> height >> resolution >> ox >> oy))
    throw MapError("ascii map: header must be `W H RES OX OY`");
  std::string trailing;
  if (hs >> trailing) throw MapError("ascii map: unexpected tokens in header");
  if (width <= 0 || height <= 0) throw MapError("ascii map: non-positive dimensions");
  if (!(resolution > 0.0)) throw MapError("ascii map: non-positive resolution");
  if (width * height > (1LL << 28)) throw MapError("ascii map: dimensions too large");

  std::vector<std::uint8_t> cells;
  cells.reserve(static_cast<std::size_t>(width * height));
  std::string line;
  for (long long row = 0; row < height; ++row) {
    if (!std::getline(in, line))
      throw MapError("ascii map: expected " + std::to_string(height) + " rows, got " +
                     std::to_string(row));
    line = strip_cr(std::move(line));
    if (static_cast<long long>(line.size()) != width)
      throw MapError("ascii map: row " + std::to_string(row) + " has " +
                     std::to_string(line.size()) + " columns, expected " + std::to_string(width));
    for (char ch : line) {
      if (ch == '#') cells.push_back(1);
      else if (ch == '.') cells.push_back(0);
      else throw MapError(std::string("ascii map: invalid cell character '") + ch + "'");
    }
  }
  while (std::getline(in, line)) {
    if (!strip_cr(line).empty()) throw MapError("ascii map: more rows than the header declares");
  }
  return OccupancyGrid(static_cast<int>(width), static_cast<int>(height), resolution, {ox, oy},
                       std::move(cells));
}

void write_ascii_map(const OccupancyGrid& grid, std::ostream& out) {
  out << fmt::format("{} {} {} {} {}\n", grid.width(), grid.height(), grid.resolution(), grid.origin().x(),
                     grid.origin().y());
  std::string row(static_cast<std::size_t>(grid.width()), '.');
  for (int cy = 0; cy < grid.height(); ++cy) {
    for (int cx = 0; cx < grid.width(); ++cx) row[cx] = grid.occupied(cx, cy) ? '#' : '.';
    out << row << '\n';
  }
}

namespace {

// Reads the next header token of a netpbm file, skipping whitespace and comments.
std::string next_pnm_token(std::istream& in) {
  std::string token;
  int ch;
  while ((ch = in.get()) != EOF) {
    if (ch == '#') {
      while ((ch = in.get()) != EOF && ch != '\n') {}
      continue;
    }
    if (std::isspace(ch)) {
      if (!token.empty()) return token;
      continue;
    }
    token.push_back(static_cast<char>(ch));
  }
  return token;
}

long long parse_pnm_int(const std::string& token, const char* what) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(token, &used);
    if (used != token.size()) throw std::invalid_argument(token);
    return v;
  } catch (const std::exception&) {
    throw MapError(std::string("pgm map: malformed ") + what);
  }
}

}  // namespace

OccupancyGrid parse_pgm_map(std::istream& pgm, double resolution, const WorldPoint& origin) {
  if (next_pnm_token(pgm) != "P5") throw MapError("pgm map: missing P5 magic");
  const long long width = parse_pnm_int(next_pnm_token(pgm), "width");
  const long long height = parse_pnm_int(next_pnm_token(pgm), "height");
  const long long maxval = parse_pnm_int(next_pnm_token(pgm), "maxval");
  if (width <= 0 || height <= 0) throw MapError("pgm map: non-positive dimensions");
  if (maxval <= 0 || maxval > 255) throw MapError("pgm map: only 8-bit graymaps are supported");
  if (!(resolution > 0.0)) throw MapError("pgm map: non-positive resolution");
  if (width * height > (1LL << 28)) throw MapError("pgm map: dimensions too large");

  const auto count = static_cast<std::size_t>(width * height);
  std::vector<char> raw(count);
  pgm.read(raw.data(), static_cast<std::streamsize>(count));
  if (static_cast<std::size_t>(pgm.gcount()) != count)
    throw MapError("pgm map: payload shorter than width*height");
  if (pgm.peek() != EOF) throw MapError("pgm map: payload longer than width*height");

  std::vector<std::uint8_t> cells(count);
  for (long long row = 0; row < height; ++row) {
    const long long cy = height - 1 - row;
    for (long long cx = 0; cx < width; ++cx) {
      const auto value = static_cast<unsigned char>(raw[static_cast<std::size_t>(row * width + cx)]);
      cells[static_cast<std::size_t>(cy * width + cx)] = 2 * static_cast<long long>(value) < maxval;
    }
  }
  return OccupancyGrid(static_cast<int>(width), static_cast<int>(height), resolution, origin,
                       std::move(cells));
}

void write_pgm_map(const OccupancyGrid& grid, std::ostream& out) {
  out << "P5\n" << grid.width() << ' ' << grid.height() << "\n255\n";
  for (int row = 0; row < grid.height(); ++row) {
    const int cy = grid.height() - 1 - row;
    for (int cx = 0; cx < grid.width(); ++cx) out.put(grid.occupied(cx, cy) ? char(0) : char(254));
  }
}

namespace {

std::filesystem::path sidecar_for(const std::filesystem::path& map) {
  auto side = map;
  side.replace_extension(".yaml");
  return side;
}

struct RasterMeta {
  double resolution = 0.0;
  double origin_x = 0.0;
  double origin_y = 0.0;
};

RasterMeta read_sidecar(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw MapError("pgm map: missing sidecar metadata " + path.string());
  RasterMeta meta;
  bool has_res = false;
  bool has_ox = false;
  bool has_oy = false;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto sep = line.find_first_of(":=");
    if (sep == std::string::npos) continue;
    std::string key = line.substr(0, sep);
    std::string value = line.substr(sep + 1);
    auto trim = [](std::string& s) {
      s.erase(0, s.find_first_not_of(" \t\r"));
      s.erase(s.find_last_not_of(" \t\r") + 1);
    };
    trim(key);
    trim(value);
    double v = 0.0;
    try {
      std::size_t used = 0;
      v = std::stod(value, &used);
      if (used != value.size()) throw std::invalid_argument(value);
    } catch (const std::exception&) {
      if (key == "resolution" || key == "origin_x" || key == "origin_y")
        throw MapError("pgm sidecar: malformed value for " + key);
      continue;
    }
    if (key == "resolution") { meta.resolution = v; has_res = true; }
    else if (key == "origin_x") { meta.origin_x = v; has_ox = true; }
    else if (key == "origin_y") { meta.origin_y = v; has_oy = true; }
  }
  if (!has_res || !has_ox || !has_oy)
    throw MapError("pgm sidecar: needs resolution, origin_x and origin_y");
  if (!(meta.resolution > 0.0)) throw MapError("pgm sidecar: non-positive resolution");
  return meta;
}

}  // namespace

OccupancyGrid load_map(const std::filesystem::path& source) {
  std::ifstream in(source, std::ios::binary);
  if (!in) throw MapError("cannot open map file " + source.string());
  char magic[2] = {0, 0};
  in.read(magic, 2);
  in.clear();
  in.seekg(0);
  if (magic[0] == 'P' && magic[1] == '5') {
    const RasterMeta meta = read_sidecar(sidecar_for(source));
    return parse_pgm_map(in, meta.resolution, {meta.origin_x, meta.origin_y});
  }
  return parse_ascii_map(in);
}

void save_map(const OccupancyGrid& grid, const std::filesystem::path& target) {
  if (target.extension() == ".pgm") {
    std::ofstream out(target, std::ios::binary);
    if (!out) throw MapError("cannot write " + target.string());
    write_pgm_map(grid, out);
    std::ofstream meta(sidecar_for(target));
    meta << fmt::format("resolution: {}\norigin_x: {}\norigin_y: {}\n", grid.resolution(), grid.origin().x(),
                        grid.origin().y());
    return;
  }
  std::ofstream out(target);
  if (!out) throw MapError("cannot write " + target.string());
  write_ascii_map(grid, out);
}

bool is_occupied(const OccupancyGrid& grid, const WorldPoint& p) {
  return grid.occupied(grid.world_to_cell(p));
}

bool circle_overlaps(const OccupancyGrid& grid, const WorldPoint& center, double radius) {
  if (radius < 0.0) throw std::invalid_argument("circle_overlaps: negative radius");
  const double res = grid.resolution();
  const CellIndex lo = grid.world_to_cell(center - WorldPoint(radius, radius));
  const CellIndex hi = grid.world_to_cell(center + WorldPoint(radius, radius));
  const double r2 = radius * radius;
  // One extra ring catches boxes that only touch the disc on a shared boundary.
  for (int cy = lo.y() - 1; cy <= hi.y() + 1; ++cy) {
    for (int cx = lo.x() - 1; cx <= hi.x() + 1; ++cx) {
      if (!grid.occupied(cx, cy)) continue;
      const WorldPoint box_lo = grid.cell_min_corner(cx, cy);
      const double dx = std::max({box_lo.x() - center.x(), 0.0, center.x() - (box_lo.x() + res)});
      const double dy = std::max({box_lo.y() - center.y(), 0.0, center.y() - (box_lo.y() + res)});
      if (dx * dx + dy * dy <= r2) return true;
    }
  }
  return false;
}

double raycast(const OccupancyGrid& grid, const WorldPoint& origin, double angle, double max_range) {
  if (!(max_range > 0.0)) throw std::invalid_argument("raycast: max_range must be positive");
  CellIndex cell = grid.world_to_cell(origin);
  if (grid.occupied(cell)) return 0.0;

  const double res = grid.resolution();
  const WorldPoint dir = direction_of(angle);
  const WorldPoint local = (origin - grid.origin()) / res;
  constexpr double inf = std::numeric_limits<double>::infinity();

  const int step_x = dir.x() > 0.0 ? 1 : (dir.x() < 0.0 ? -1 : 0);
  const int step_y = dir.y() > 0.0 ? 1 : (dir.y() < 0.0 ? -1 : 0);
  // Distance along the ray to the next vertical / horizontal cell boundary.
  double next_x = inf;
  double next_y = inf;
  double delta_x = inf;
  double delta_y = inf;
  if (step_x != 0) {
    delta_x = res / std::abs(dir.x());
    const double frac = step_x > 0 ? (cell.x() + 1) - local.x() : local.x() - cell.x();
    next_x = frac * delta_x;
  }
  if (step_y != 0) {
    delta_y = res / std::abs(dir.y());
    const double frac = step_y > 0 ? (cell.y() + 1) - local.y() : local.y() - cell.y();
    next_y = frac * delta_y;
  }

  while (true) {
    double t;
    if (next_x < next_y) {
      t = next_x;
      cell.x() += step_x;
      next_x += delta_x;
    } else {
      t = next_y;
      cell.y() += step_y;
      next_y += delta_y;
    }
    if (t >= max_range) return max_range;
    if (grid.occupied(cell)) return t;
  }
}

bool segment_clear(const OccupancyGrid& grid, const WorldPoint& a, const WorldPoint& b) {
  const WorldPoint d = b - a;
  const double length = d.norm();
  if (is_occupied(grid, a)) return false;
  if (length == 0.0) return true;
  return raycast(grid, a, std::atan2(d.y(), d.x()), length) >= length;
}

}  // namespace occnav
