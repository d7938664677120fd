#include "occnav/distance_field.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace occnav {

namespace {

// 1D squared distance transform (Felzenszwalb & Huttenlocher lower envelope).
// Free samples carry a large finite sentinel instead of infinity.
void edt_1d(const std::vector<double>& f, std::vector<double>& d, std::vector<int>& v,
            std::vector<double>& z) {
  const int n = static_cast<int>(f.size());
  constexpr double inf = std::numeric_limits<double>::infinity();
  int k = 0;
  v[0] = 0;
  z[0] = -inf;
  z[1] = inf;
  for (int q = 1; q < n; ++q) {
    double s = ((f[q] + double(q) * q) - (f[v[k]] + double(v[k]) * v[k])) / (2.0 * (q - v[k]));
    while (s <= z[k]) {
      --k;
      s = ((f[q] + double(q) * q) - (f[v[k]] + double(v[k]) * v[k])) / (2.0 * (q - v[k]));
    }
    ++k;
    v[k] = q;
    z[k] = s;
    z[k + 1] = inf;
  }
  k = 0;
  for (int q = 0; q < n; ++q) {
    while (z[k + 1] < q) ++k;
    const double diff = q - v[k];
    d[q] = diff * diff + f[v[k]];
  }
}

}  // namespace

DistanceField::DistanceField(const OccupancyGrid& grid)
    : width_(grid.width()), height_(grid.height()), resolution_(grid.resolution()),
      origin_(grid.origin()) {
  const int w = width_ + 2;
  const int h = height_ + 2;
  constexpr double far = 1e20;
  Eigen::MatrixXd sq(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) sq(x, y) = grid.occupied(x - 1, y - 1) ? 0.0 : far;

  const int n = std::max(w, h);
  std::vector<double> f(n), d(n), z(n + 1);
  std::vector<int> v(n);
  for (int x = 0; x < w; ++x) {
    f.resize(h);
    d.resize(h);
    for (int y = 0; y < h; ++y) f[y] = sq(x, y);
    edt_1d(f, d, v, z);
    for (int y = 0; y < h; ++y) sq(x, y) = d[y];
  }
  for (int y = 0; y < h; ++y) {
    f.resize(w);
    d.resize(w);
    for (int x = 0; x < w; ++x) f[x] = sq(x, y);
    edt_1d(f, d, v, z);
    for (int x = 0; x < w; ++x) sq(x, y) = d[x];
  }
  // Centre-to-centre distance minus half a cell approximates distance to the box face.
  samples_ = (sq.array().sqrt() * resolution_ - 0.5 * resolution_).max(0.0).matrix();
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      if (grid.occupied(x - 1, y - 1)) samples_(x, y) = 0.0;
}

double DistanceField::at_cell(int cx, int cy) const {
  cx = std::clamp(cx + 1, 0, width_ + 1);
  cy = std::clamp(cy + 1, 0, height_ + 1);
  return samples_(cx, cy);
}

double DistanceField::distance(const WorldPoint& p) const {
  WorldPoint unused;
  return distance(p, unused);
}

double DistanceField::distance(const WorldPoint& p, WorldPoint& gradient) const {
  // Sample (i, j) of the padded array sits at the centre of cell (i-1, j-1).
  const WorldPoint s = (p - origin_) / resolution_ + WorldPoint(0.5, 0.5);
  const double max_x = width_ + 1;
  const double max_y = height_ + 1;
  if (!(s.x() >= 0.0 && s.y() >= 0.0 && s.x() <= max_x && s.y() <= max_y)) {
    gradient.setZero();
    return 0.0;
  }
  const int i = std::min(static_cast<int>(s.x()), width_);
  const int j = std::min(static_cast<int>(s.y()), height_);
  const double fx = s.x() - i;
  const double fy = s.y() - j;
  const double d00 = samples_(i, j);
  const double d10 = samples_(i + 1, j);
  const double d01 = samples_(i, j + 1);
  const double d11 = samples_(i + 1, j + 1);
  const double value = (1 - fx) * (1 - fy) * d00 + fx * (1 - fy) * d10 + (1 - fx) * fy * d01 +
                       fx * fy * d11;
  gradient.x() = ((1 - fy) * (d10 - d00) + fy * (d11 - d01)) / resolution_;
  gradient.y() = ((1 - fx) * (d01 - d00) + fx * (d11 - d10)) / resolution_;
  return value;
}

}  // namespace occnav
