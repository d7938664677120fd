#include "occnav/passage.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace occnav {

void PassageLimits::validate() const {
  if (!(0.0 < base_min && base_min < base_max) || !(0.0 < side_min && side_min < side_max))
    throw std::invalid_argument("passage limits: need 0 < min < max for base and sides");
  if (!(0.0 < isosceles_tol && isosceles_tol < 1.0))
    throw std::invalid_argument("passage limits: isosceles_tol must be in (0, 1)");
  if (!(wall_diff_max > 0.0)) throw std::invalid_argument("passage limits: wall_diff_max must be positive");
}

std::string_view to_string(PassageKind kind) {
  switch (kind) {
    case PassageKind::Doorway: return "Doorway";
    case PassageKind::Pillar: return "Pillar";
    case PassageKind::WallPassage: return "WallPassage";
    case PassageKind::NoPassage: return "NoPassage";
  }
  return "NoPassage";
}

std::string_view to_string(PlanMode mode) {
  return mode == PlanMode::PassThrough ? "PassThrough" : "Normal";
}

PassageClass classify_passage(std::span<const InvisibleHuman> humans, const LaserScan& scan,
                              const PassageLimits& limits) {
  limits.validate();
  const WorldPoint robot = scan.pose.position;

  // Isosceles triangle with the robot at the apex.
  std::optional<std::pair<std::size_t, std::size_t>> best;
  double best_mean_side = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < humans.size(); ++a) {
    for (std::size_t b = a + 1; b < humans.size(); ++b) {
      const double side_a = (humans[a].position - robot).norm();
      const double side_b = (humans[b].position - robot).norm();
      const double base = (humans[a].position - humans[b].position).norm();
      const bool isosceles = std::abs(side_a - side_b) <= limits.isosceles_tol * std::max(side_a, side_b);
      const bool base_ok = base >= limits.base_min && base <= limits.base_max;
      const bool sides_ok = side_a >= limits.side_min && side_a <= limits.side_max &&
                            side_b >= limits.side_min && side_b <= limits.side_max;
      if (!(isosceles && base_ok && sides_ok)) continue;
      const double mean_side = 0.5 * (side_a + side_b);
      if (mean_side < best_mean_side) {
        best_mean_side = mean_side;
        best = std::make_pair(a, b);
      }
    }
  }

  PassageClass result;
  if (best) {
    const WorldPoint& ha = humans[best->first].position;
    const WorldPoint& hb = humans[best->second].position;
    const WorldPoint midpoint = 0.5 * (ha + hb);
    const double bisector = (midpoint - robot).norm();
    result.kind = range_at_angle(scan, 0.0) < bisector ? PassageKind::Pillar : PassageKind::Doorway;
    result.anchor = midpoint;
    result.vertices = {ha, hb};
    return result;
  }

  if (humans.size() == 1) {
    const InvisibleHuman& h = humans.front();
    const double distance = (h.position - robot).norm();
    if (distance >= limits.side_min && distance <= limits.side_max) {
      const double corner_angle = scan.angle_of(h.pair.index1);
      const double mirrored = range_at_angle(scan, normalize_angle(-corner_angle));
      if (std::abs(mirrored - distance) < limits.wall_diff_max) {
        result.kind = PassageKind::WallPassage;
        result.anchor = h.position;
        result.vertices = {h.position};
        return result;
      }
    }
  }
  return result;
}

PlanDirective passage_directive(const PassageClass& cls, double vmax_passthrough) {
  if (cls.kind == PassageKind::NoPassage) return {};
  return {PlanMode::PassThrough, true, vmax_passthrough};
}

}  // namespace occnav
