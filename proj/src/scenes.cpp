#include "occnav/scenes.hpp"

#include <numbers>

namespace occnav {

namespace {

constexpr double kRes = 0.05;

int cells(double metres) { return static_cast<int>(std::lround(metres / kRes)); }

Scenario make(std::string name, OccupancyGrid grid, Pose2D start, WorldPoint goal, double duration) {
  Scenario s;
  s.map_ref = name + ".txt";
  s.name = std::move(name);
  s.map = std::make_shared<const OccupancyGrid>(std::move(grid));
  s.start = start;
  s.goal = goal;
  s.duration_s = duration;
  return s;
}

// 16 x 10 m: corridor y in [4, 6] along x, crossed by a corridor x in [8, 9.5].
OccupancyGrid emergence_map() {
  MapBuilder b(cells(16.0), cells(10.0), kRes);
  b.border();
  b.fill_rect({0.0, 0.0}, {8.0, 4.0});
  b.fill_rect({9.5, 0.0}, {16.0, 4.0});
  b.fill_rect({0.0, 6.0}, {8.0, 10.0});
  b.fill_rect({9.5, 6.0}, {16.0, 10.0});
  return b.build();
}

}  // namespace

OccupancyGrid doorway_map(const DoorwayGeometry& g) {
  MapBuilder b(cells(12.0), cells(8.0), kRes);
  b.border();
  b.fill_rect({g.wall_x, 0.0}, {g.wall_x + g.thickness, g.door_lo});
  b.fill_rect({g.wall_x, g.door_hi}, {g.wall_x + g.thickness, 8.0});
  return b.build();
}

SceneView doorway_view() { return {doorway_map(), {{5.2, 4.0}, 0.0}}; }

SceneView wall_passage_view() {
  // Corridor y in [2, 4]; the thin upper wall stops at x = 6.
  MapBuilder b(cells(12.0), cells(8.0), kRes);
  b.border();
  b.fill_rect({0.0, 0.0}, {12.0, 2.0});
  b.fill_rect({0.0, 4.0}, {6.0, 4.1});
  return {b.build(), {{5.0, 3.0}, 0.0}};
}

SceneView pillar_view() {
  MapBuilder b(cells(12.0), cells(8.0), kRes);
  b.border();
  b.fill_rect({6.0, 3.2}, {6.4, 4.8});
  return {b.build(), {{5.2, 4.0}, 0.0}};
}

Scenario doorway_scenario() {
  Scenario s = make("doorway", doorway_map(), {{1.5, 4.0}, 0.0}, {10.5, 4.0}, 40.0);
  s.controller.plan.weights.invisible = 12.0;
  return s;
}

Scenario corridor_openings_scenario() {
  // Corridor y in [2, 4.5] with doors into side rooms on both walls.
  MapBuilder b(cells(20.0), cells(8.0), kRes);
  b.border();
  b.fill_rect({0.0, 1.9}, {20.0, 2.0});
  b.fill_rect({0.0, 4.5}, {20.0, 4.6});
  b.fill_rect({5.0, 1.9}, {6.2, 2.0}, false);
  b.fill_rect({11.0, 4.5}, {12.2, 4.6}, false);
  b.fill_rect({15.0, 1.9}, {16.2, 2.0}, false);
  for (double x : {4.0, 8.0, 12.0, 16.0}) {
    b.fill_rect({x, 0.0}, {x + 0.1, 1.9});
    b.fill_rect({x - 1.0, 4.6}, {x - 0.9, 8.0});
  }
  return make("corridor_openings", b.build(), {{1.0, 3.25}, 0.0}, {19.0, 3.25}, 60.0);
}

Scenario pillar_corridor_scenario() {
  MapBuilder b(cells(16.0), cells(8.0), kRes);
  b.border();
  b.fill_rect({0.0, 0.0}, {16.0, 1.5});
  b.fill_rect({0.0, 6.5}, {16.0, 8.0});
  b.fill_rect({7.0, 3.2}, {7.4, 4.8});
  return make("pillar_corridor", b.build(), {{1.0, 4.0}, 0.0}, {15.0, 4.0}, 50.0);
}

Scenario emergence_scenario(std::uint64_t seed) {
  Scenario s = make("emergence", emergence_map(), {{1.0, 5.0}, 0.0}, {15.0, 5.0}, 40.0);
  HumanScript h;
  h.knots = {{8.75, 9.0, 0.0}, {8.75, 9.0, 8.0}, {8.75, 1.0, 14.15}};
  s.humans.push_back(h);
  s.jitter = {0.5, 0.1};
  s.controller.plan.weights.invisible = 24.0;
  s.seed = seed;
  return s;
}

Scenario empty_scenario() {
  MapBuilder b(cells(12.0), cells(6.0), kRes);
  b.border();
  return make("empty", b.build(), {{1.0, 3.0}, 0.0}, {11.0, 3.0}, 30.0);
}

std::vector<Scenario> canonical_scenarios() {
  return {doorway_scenario(), corridor_openings_scenario(), pillar_corridor_scenario(),
          emergence_scenario(), empty_scenario()};
}

}  // namespace occnav
