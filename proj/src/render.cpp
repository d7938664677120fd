#include "occnav/render.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

namespace occnav {

namespace {

struct Frame {
  WorldPoint lo;
  WorldPoint hi;
  double scale;

  double x(double wx) const { return (wx - lo.x()) * scale; }
  double y(double wy) const { return (hi.y() - wy) * scale; }
};

std::string time_colour(double f) {
  const int r = static_cast<int>(std::lround(40 + 200 * f));
  const int b = static_cast<int>(std::lround(240 - 200 * f));
  return fmt::format("rgb({},60,{})", r, b);
}

}  // namespace

std::string render_svg(const RenderInput& in) {
  WorldPoint lo(std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity());
  WorldPoint hi = -lo;
  auto grow = [&](const WorldPoint& p) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  };
  if (in.map) {
    grow(in.map->origin());
    grow(in.map->max_corner());
  } else {
    for (const auto& r : in.path) grow(r.position);
    for (const auto& d : in.detections) grow(d.position);
    if (in.robot) grow(in.robot->position);
    if (!std::isfinite(lo.x())) {
      lo = WorldPoint::Zero();
      hi = WorldPoint(1.0, 1.0);
    }
    lo -= WorldPoint(1.0, 1.0);
    hi += WorldPoint(1.0, 1.0);
  }
  const Frame f{lo, hi, in.pixels_per_metre};
  const double width = (hi.x() - lo.x()) * f.scale;
  const double height = (hi.y() - lo.y()) * f.scale;

  std::string svg = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{:.1f}\" height=\"{:.1f}\" "
      "viewBox=\"0 0 {:.1f} {:.1f}\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n",
      width, height, width, height);

  if (in.map) {
    const auto& g = *in.map;
    const double res = g.resolution();
    svg += "<g class=\"map\" fill=\"#333\">\n";
    for (int cy = 0; cy < g.height(); ++cy) {
      for (int cx = 0; cx < g.width();) {
        if (!g.occupied(cx, cy)) {
          ++cx;
          continue;
        }
        int end = cx;
        while (end < g.width() && g.occupied(end, cy)) ++end;
        const WorldPoint c = g.cell_min_corner(cx, cy);
        svg += fmt::format("<rect x=\"{:.2f}\" y=\"{:.2f}\" width=\"{:.2f}\" height=\"{:.2f}\"/>\n", f.x(c.x()),
                           f.y(c.y() + res), (end - cx) * res * f.scale, res * f.scale);
        cx = end;
      }
    }
    svg += "</g>\n";
  }

  if (!in.path.empty()) {
    svg += "<polyline class=\"path\" fill=\"none\" stroke=\"#888\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < in.path.size(); ++i)
      svg += fmt::format("{}{:.2f},{:.2f}", i ? " " : "", f.x(in.path[i].position.x()), f.y(in.path[i].position.y()));
    svg += "\"/>\n<g class=\"path-time\">\n";
    const double n = static_cast<double>(std::max<std::size_t>(in.path.size() - 1, 1));
    for (std::size_t i = 0; i < in.path.size(); ++i)
      svg += fmt::format("<circle cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"2.5\" fill=\"{}\"/>\n", f.x(in.path[i].position.x()),
                         f.y(in.path[i].position.y()), time_colour(i / n));
    svg += "</g>\n";
  }

  if (!in.detections.empty()) {
    svg += "<g class=\"detections\" stroke=\"#e0a000\" stroke-width=\"2\" fill=\"none\">\n";
    for (const auto& d : in.detections) {
      const double r = 0.3 * f.scale;
      const WorldPoint tip = d.position + 0.5 * direction_of(d.direction);
      svg += fmt::format("<circle cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"{:.2f}\"/>\n", f.x(d.position.x()),
                         f.y(d.position.y()), r);
      svg += fmt::format("<line class=\"arrow\" x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\"/>\n",
                         f.x(d.position.x()), f.y(d.position.y()), f.x(tip.x()), f.y(tip.y()));
    }
    svg += "</g>\n";
  }

  if (in.robot) {
    const WorldPoint tip = in.robot->position + 0.6 * direction_of(in.robot->heading);
    svg += fmt::format(
        "<g class=\"robot\" stroke=\"#2060c0\" stroke-width=\"2\" fill=\"none\"><circle cx=\"{:.2f}\" "
        "cy=\"{:.2f}\" r=\"{:.2f}\"/><line x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\"/></g>\n",
        f.x(in.robot->position.x()), f.y(in.robot->position.y()), 0.5 * f.scale, f.x(in.robot->position.x()),
        f.y(in.robot->position.y()), f.x(tip.x()), f.y(tip.y()));
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace occnav
