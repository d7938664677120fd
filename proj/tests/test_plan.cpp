#include "occnav/plan.hpp"
#include "occnav/random.hpp"

#include <doctest.h>

using namespace occnav;

namespace {

OccupancyGrid open_floor() { return MapBuilder(240, 120, 0.05).build(); }  // 12 m x 6 m

// Wall across x in [5, 5.2] with a gap of the given width centred on y = 3.
OccupancyGrid wall_with_gap(double gap) {
  MapBuilder b(240, 120, 0.05);
  b.fill_rect({5.0, 0.0}, {5.2, 6.0});
  b.fill_rect({5.0, 3.0 - gap / 2}, {5.2, 3.0 + gap / 2}, false);
  return b.build();
}

PlanRequest request_from(const WorldPoint& start, const WorldPoint& goal) {
  PlanRequest r;
  r.pose = {start, 0.0};
  r.goal = goal;
  return r;
}

double max_speed(const TimedTrajectory& t) { return t.segment_speeds().maxCoeff(); }

}  // namespace

TEST_CASE("timed trajectory basics") {
  auto t = TimedTrajectory::uniform({0, 0}, {3, 4}, 6, 2.5);
  CHECK_NOTHROW(t.validate());
  CHECK(t.duration() == doctest::Approx(2.5));
  CHECK(t.segment_speeds().size() == 5);
  CHECK(t.segment_speeds()(0) == doctest::Approx(2.0));
  CHECK(t.position_at(-1.0) == t.point(0));
  CHECK(t.position_at(10.0) == t.point(5));
  CHECK(t.position_at(1.25).x() == doctest::Approx(1.5));
  CHECK(t.pose(0).heading == doctest::Approx(std::atan2(4.0, 3.0)));
  t.times(0) = 0.1;
  CHECK_THROWS(t.validate());
  CHECK_THROWS(TimedTrajectory::uniform({0, 0}, {1, 1}, 1, 1.0));
}

TEST_CASE("config validation") {
  PlanConfig c;
  CHECK_NOTHROW(c.validate());
  CHECK(c.waypoint_dt() == doctest::Approx(5.0 / 29.0));
  c.vmax_passthrough = 1.0;
  CHECK_THROWS(c.validate());
  PlanConfig w;
  w.weights.smoothness = -1.0;
  CHECK_THROWS(w.validate());
  PlanConfig few;
  few.waypoint_count = 2;
  CHECK_THROWS(few.validate());
}

TEST_CASE("open floor gives a near-straight trajectory") {
  const LocalPlanner planner(open_floor(), PlanConfig{});
  const auto req = request_from({1.0, 3.0}, {11.0, 2.0});
  const auto t = optimize_cycle(planner, req);
  const WorldPoint a = req.pose.position;
  const WorldPoint u = (req.goal - a).normalized();
  double worst = 0.0;
  for (int i = 0; i < t.size(); ++i) {
    const WorldPoint d = t.point(i) - a;
    worst = std::max(worst, std::abs(d.x() * u.y() - d.y() * u.x()));
  }
  CHECK(worst < 0.05);
  CHECK(t.point(0) == a);
  CHECK(max_speed(t) <= planner.config().vmax + 1e-9);
  // makes use of the available speed
  CHECK(max_speed(t) > 0.9 * planner.config().vmax);
}

TEST_CASE("speed cap holds under pass-through") {
  const LocalPlanner planner(open_floor(), PlanConfig{});
  auto req = request_from({1.0, 3.0}, {11.0, 3.0});
  req.directive = {PlanMode::PassThrough, true, 0.3};
  const auto t = optimize_cycle(planner, req);
  CHECK(max_speed(t) <= 0.3 + 1e-9);
  CHECK(planner.speed_cap(req.directive) == 0.3);
  CHECK(planner.speed_cap({}) == planner.config().vmax);
}

TEST_CASE("descent: optimized cost never exceeds the seed's") {
  const LocalPlanner planner(wall_with_gap(1.6), PlanConfig{});
  Rng rng(81);
  for (int trial = 0; trial < 10; ++trial) {
    auto req = request_from({rng.uniform(1.0, 3.0), rng.uniform(1.5, 4.5)}, {10.0, rng.uniform(1.5, 4.5)});
    const std::vector<WorldPoint> inv{{rng.uniform(3.0, 7.0), rng.uniform(1.0, 5.0)}};
    const std::vector<VisibleHuman> vis{{{rng.uniform(3.0, 7.0), rng.uniform(1.0, 5.0)}, {0.2, -0.1}}};
    req.invisible = inv;
    req.visible = vis;
    const auto seed = planner.seed(req);
    const auto out = planner.optimize(req);
    CHECK(planner.objective(out, req) <= planner.objective(seed, req));
  }
}

TEST_CASE("objective gradient matches finite differences") {
  const LocalPlanner planner(wall_with_gap(1.6), PlanConfig{});
  auto req = request_from({3.0, 2.6}, {10.0, 3.0});
  const std::vector<WorldPoint> inv{{4.4, 3.7}};
  const std::vector<VisibleHuman> vis{{{4.0, 2.0}, {0.1, 0.2}}};
  req.invisible = inv;
  req.visible = vis;
  auto t = planner.seed(req);
  Rng rng(82);
  for (int i = 1; i < t.size(); ++i) t.positions.col(i) += WorldPoint(rng.uniform(-0.05, 0.05), rng.uniform(-0.05, 0.05));
  const auto grad = planner.objective_gradient(t, req);
  const double h = 1e-7;
  int checked = 0;
  for (int i = 1; i < t.size(); ++i)
    for (int a = 0; a < 2; ++a) {
      auto plus = t;
      auto minus = t;
      plus.positions(a, i) += h;
      minus.positions(a, i) -= h;
      const double fd = (planner.objective(plus, req) - planner.objective(minus, req)) / (2 * h);
      CHECK(grad(a, i) == doctest::Approx(fd).epsilon(1e-4));
      ++checked;
    }
  CHECK(checked == 2 * (t.size() - 1));
}

TEST_CASE("cost isolation: zero weight equals no detections") {
  PlanConfig zero;
  zero.weights.invisible = 0.0;
  const LocalPlanner planner(open_floor(), zero);
  auto with = request_from({1.0, 3.0}, {11.0, 3.0});
  const std::vector<WorldPoint> inv{{3.0, 3.5}, {4.0, 2.2}};
  with.invisible = inv;
  const auto without = request_from({1.0, 3.0}, {11.0, 3.0});
  CHECK(optimize_cycle(planner, with).positions == optimize_cycle(planner, without).positions);

  // the directive switch has the same effect at full weight
  const LocalPlanner weighted(open_floor(), PlanConfig{});
  auto disabled = with;
  disabled.directive.disable_invisible_cost = true;
  CHECK(optimize_cycle(weighted, disabled).positions == optimize_cycle(weighted, without).positions);
}

TEST_CASE("invisible humans push the reaction-window waypoints away") {
  PlanConfig heavy;
  heavy.weights.invisible = 12.0;
  const LocalPlanner planner(open_floor(), heavy);
  PlanConfig off_cfg;
  off_cfg.weights.invisible = 0.0;
  const LocalPlanner off(open_floor(), off_cfg);
  auto req = request_from({1.0, 3.0}, {11.0, 3.0});
  const WorldPoint h(1.7, 3.6);
  const std::vector<WorldPoint> inv{h};
  req.invisible = inv;
  const auto a = optimize_cycle(planner, req);
  const auto b = optimize_cycle(off, req);
  const double window = planner.config().invisible_model.reaction_time;
  for (int i = 1; i < a.size() && a.times(i) <= window; ++i)
    CHECK((a.point(i) - h).norm() > (b.point(i) - h).norm());
  // less goalward progress on the first segment
  const WorldPoint u = (req.goal - req.pose.position).normalized();
  CHECK((a.point(1) - a.point(0)).dot(u) < (b.point(1) - b.point(0)).dot(u));
  CHECK(planner.objective(a, req) < planner.objective(b, req));
}

TEST_CASE("deterministic") {
  const LocalPlanner planner(wall_with_gap(1.6), PlanConfig{});
  auto req = request_from({2.0, 1.5}, {10.0, 4.0});
  const std::vector<WorldPoint> inv{{5.5, 3.9}};
  req.invisible = inv;
  CHECK(optimize_cycle(planner, req).positions == optimize_cycle(planner, req).positions);
}

TEST_CASE("A* seed through a gap, failure when it is too narrow") {
  const LocalPlanner wide(wall_with_gap(1.6), PlanConfig{});
  const auto path = wide.shortest_path({2.0, 1.0}, {9.0, 5.0});
  REQUIRE(path.size() > 2);
  CHECK(path.front() == WorldPoint(2.0, 1.0));
  CHECK(path.back() == WorldPoint(9.0, 5.0));
  for (std::size_t i = 1; i + 1 < path.size(); ++i) CHECK(wide.field().distance(path[i]) >= 0.5 - 1e-9);
  double length = 0.0;
  for (std::size_t i = 1; i < path.size(); ++i) length += (path[i] - path[i - 1]).norm();
  // at least the detour through the gap, at most that plus grid staircase slack
  const double detour = (WorldPoint(5.1, 3.0) - path.front()).norm() + (path.back() - WorldPoint(5.1, 3.0)).norm();
  CHECK(length >= detour - 0.6);
  CHECK(length <= 1.2 * detour);

  const LocalPlanner narrow(wall_with_gap(0.6), PlanConfig{});
  CHECK(narrow.shortest_path({2.0, 1.0}, {9.0, 5.0}).empty());
  const auto req = request_from({2.0, 1.0}, {9.0, 5.0});
  CHECK_THROWS_AS(optimize_cycle(narrow, req), PlanningFailure);
}

TEST_CASE("warm start survives when no fresh seed exists") {
  const LocalPlanner narrow(wall_with_gap(0.6), PlanConfig{});
  auto req = request_from({2.0, 3.0}, {9.0, 3.0});
  const auto prev = TimedTrajectory::uniform({2.0, 3.0}, {3.0, 3.0}, narrow.config().waypoint_count, 5.0);
  req.previous = &prev;
  req.elapsed = 0.1;
  const auto t = optimize_cycle(narrow, req);
  CHECK(t.point(0) == req.pose.position);
  CHECK(max_speed(t) <= narrow.config().vmax + 1e-9);
}

TEST_CASE("projection enforces the cap front to back") {
  const LocalPlanner planner(open_floor(), PlanConfig{});
  auto t = TimedTrajectory::uniform({0, 0}, {10, 0}, 11, 1.0);
  planner.project_speed(t, 0.5);
  CHECK(t.point(0) == WorldPoint(0, 0));
  for (int i = 1; i < t.size(); ++i) CHECK(t.segment_speeds()(i - 1) <= 0.5 + 1e-12);
  CHECK(t.point(10).x() == doctest::Approx(0.5));
}

TEST_CASE("footprint clearance") {
  const LocalPlanner planner(wall_with_gap(0.6), PlanConfig{});
  CHECK(planner.footprint_clear({1.0, 1.0}, {3.0, 5.0}));
  CHECK_FALSE(planner.footprint_clear({1.0, 3.0}, {9.0, 3.0}));
}
