#pragma once

#include "occnav/scenario.hpp"

#include <string_view>
#include <vector>

namespace occnav {

/// Static map plus the robot pose the scene is meant to be looked at from.
struct SceneView {
  OccupancyGrid grid;
  Pose2D pose;
};

// Classification views: a doorway ahead, a wall ending beside the robot, a pillar ahead.
SceneView doorway_view();
SceneView wall_passage_view();
SceneView pillar_view();

struct DoorwayGeometry {
  double wall_x = 6.0;      // near face
  double thickness = 0.1;
  double door_lo = 3.4;
  double door_hi = 4.6;
};

OccupancyGrid doorway_map(const DoorwayGeometry& g = {});

// Closed-loop scenarios; map_ref is "<name>.txt".
Scenario doorway_scenario();
Scenario corridor_openings_scenario();
Scenario pillar_corridor_scenario();
Scenario emergence_scenario(std::uint64_t seed = 1);
Scenario empty_scenario();

std::vector<Scenario> canonical_scenarios();

}  // namespace occnav
