#pragma once

#include "occnav/detect.hpp"

#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace occnav {

struct PassageLimits {
  double base_max = 3.0;
  double base_min = 1.6;
  double side_max = 2.0;
  double side_min = 0.8;
  double isosceles_tol = 0.15;  // allowed |s_a - s_b| / max(s_a, s_b)
  double wall_diff_max = 1.0;

  void validate() const;
};

enum class PassageKind { Doorway, Pillar, WallPassage, NoPassage };

std::string_view to_string(PassageKind kind);

struct PassageClass {
  PassageKind kind = PassageKind::NoPassage;
  /// Base midpoint for Doorway/Pillar, the lone human for WallPassage.
  std::optional<WorldPoint> anchor;
  /// The humans that produced the class (two base vertices, or one).
  std::vector<WorldPoint> vertices;
};

PassageClass classify_passage(std::span<const InvisibleHuman> humans, const LaserScan& scan,
                              const PassageLimits& limits = {});

enum class PlanMode { Normal, PassThrough };

std::string_view to_string(PlanMode mode);

struct PlanDirective {
  PlanMode mode = PlanMode::Normal;
  bool disable_invisible_cost = false;
  std::optional<double> vmax_cap;
};

PlanDirective passage_directive(const PassageClass& cls, double vmax_passthrough = 0.3);

}  // namespace occnav
