#include "fixtures.hpp"
#include "oracles.hpp"

#include "occnav/detect.hpp"
#include "occnav/maze.hpp"
#include "occnav/scenes.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace occnav;

namespace {

// Corridor y in [2, 4] with a 1 m doorway in its upper wall leading to a room.
OccupancyGrid side_door_corridor() {
  MapBuilder b(320, 160, 0.05);
  b.fill_rect({0.0, 0.0}, {16.0, 8.0});
  b.fill_rect({0.5, 2.0}, {15.5, 4.0}, false);
  b.fill_rect({5.0, 4.0}, {6.0, 4.1}, false);
  b.fill_rect({3.0, 4.1}, {9.0, 7.0}, false);
  return b.build();
}

// Corridor along +x that turns left into a corridor along +y.
OccupancyGrid left_turn() {
  MapBuilder b(240, 240, 0.05, {-1.0, -1.0});
  b.fill_rect({-1.0, -1.0}, {11.0, 11.0});
  b.fill_rect({0.0, 1.0}, {8.0, 3.0}, false);
  b.fill_rect({6.0, 1.0}, {8.0, 10.0}, false);
  return b.build();
}

struct BrutePair {
  int corner;
  int far;
};

// Consecutive endpoints further apart than the threshold, corner in the front sector.
std::vector<BrutePair> brute_pairs(const LaserScan& scan, const DetectionParams& p) {
  std::vector<BrutePair> out;
  const int n = scan.size();
  for (int i = 0; i < n; ++i) {
    const int j = (i + 1) % n;
    const WorldPoint a = scan.pose.position + scan.ranges[i] * direction_of(scan.world_angle_of(i));
    const WorldPoint b = scan.pose.position + scan.ranges[j] * direction_of(scan.world_angle_of(j));
    if ((a - b).norm() <= p.gap_threshold) continue;
    const int corner = scan.ranges[i] <= scan.ranges[j] ? i : j;
    const double bearing = std::remainder(scan.config.angle_of(corner), 2.0 * std::numbers::pi);
    if (scan.ranges[corner] > p.front_limit || std::abs(bearing) > std::numbers::pi / 2) continue;
    out.push_back({corner, corner == i ? j : i});
  }
  return out;
}

double segment_distance(const WorldPoint& a, const WorldPoint& b, const WorldPoint& q) {
  const WorldPoint ab = b - a;
  const double t = std::clamp((q - a).dot(ab) / ab.squaredNorm(), 0.0, 1.0);
  return (a + t * ab - q).norm();
}

void check_sound(const OccupancyGrid& g, const Detection& det, const DetectionParams& p) {
  for (const auto& h : det.humans) {
    CHECK(oracle::outside_contour(det.scan, h.position));
    CHECK_FALSE(oracle::circle_overlaps(g, h.position, p.h_rad));
    const WorldPoint from = h.pair.contour_from();
    const WorldPoint to = h.pair.contour_to();
    CHECK(oracle::cross(to - from, h.position - from) < 0.0);
    CHECK(oracle::cross(to - from, det.scan.pose.position - from) > 0.0);
    CHECK(std::abs(oracle::distance_to_line(h.pair.v1, h.pair.v2, h.position) - p.offset()) < 1e-6);
    const WorldPoint to_robot = det.scan.pose.position - h.position;
    CHECK(std::abs(std::remainder(h.direction - std::atan2(to_robot.y(), to_robot.x()),
                                  2.0 * std::numbers::pi)) < 1e-6);
    CHECK(h.distance_to_robot == doctest::Approx(to_robot.norm()));
  }
  for (std::size_t i = 0; i < det.humans.size(); ++i)
    for (std::size_t j = i + 1; j < det.humans.size(); ++j)
      CHECK((det.humans[i].position - det.humans[j].position).norm() >= p.h_rad);
}

}  // namespace

TEST_CASE("offset examples") {
  const WorldPoint o(0, 0);
  const auto r = offset_right<double>(o, {1, 0}, {0.5, 0}, 0.45);
  CHECK(r.x() == doctest::Approx(0.5));
  CHECK(r.y() == doctest::Approx(-0.45));
  const auto r2 = offset_right<double>(o, {0, 1}, {0, 0.5}, 0.45);
  CHECK(r2.x() == doctest::Approx(0.45));
  CHECK(r2.y() == doctest::Approx(0.5));
  const auto l = offset_left<double>(o, {1, 0}, {0.5, 0}, 0.45);
  CHECK(l.x() == doctest::Approx(0.5));
  CHECK(l.y() == doctest::Approx(0.45));
  CHECK_THROWS_AS(offset_right<double>(o, o, o, 0.45), std::invalid_argument);
  CHECK_THROWS_AS(offset_left<double>(o, o, o, 0.45), std::invalid_argument);
  const WorldPoint p(0.3, 0.7);
  CHECK(offset_left<double>(o, {2, 1}, p, 0.0) == p);
}

TEST_CASE("offset sides, perpendicularity and reflection symmetry") {
  Rng rng(41);
  for (int i = 0; i < 2000; ++i) {
    const WorldPoint v1(rng.uniform(-5, 5), rng.uniform(-5, 5));
    const WorldPoint v2(rng.uniform(-5, 5), rng.uniform(-5, 5));
    const WorldPoint p = v1 + rng.uniform() * (v2 - v1);
    const double d = rng.uniform(0.01, 2.0);
    const WorldPoint r = offset_right(v1, v2, p, d);
    const WorldPoint l = offset_left(v1, v2, p, d);
    CHECK(oracle::cross(v2 - v1, r - p) < 0.0);
    CHECK(oracle::cross(v2 - v1, l - p) > 0.0);
    CHECK(std::abs((r - p).dot(v2 - v1)) <= 1e-9 * (v2 - v1).norm());
    CHECK((r - p).norm() == doctest::Approx(d));
    // reflection of r across the line v1v2 is l
    const WorldPoint u = (v2 - v1).normalized();
    const WorldPoint foot = v1 + u * (r - v1).dot(u);
    const WorldPoint mirrored = 2.0 * foot - r;
    CHECK((mirrored - l).norm() < 1e-9);
  }
}

TEST_CASE("gap pairs: corridor with a side doorway") {
  const auto g = side_door_corridor();
  const DetectionParams p;
  const auto scan = simulate_scan(g, {{2.0, 3.0}, 0.0});
  const auto pairs = find_gap_pairs(scan, p);
  const auto brute = brute_pairs(scan, p);
  CHECK(brute.size() == 2);
  REQUIRE(pairs.size() == brute.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    CHECK(pairs[i].index1 == brute[i].corner);
    CHECK(pairs[i].index2 == brute[i].far);
    CHECK(pairs[i].separation > p.gap_threshold);
    CHECK((pairs[i].v1 - scan.pose.position).norm() <= (pairs[i].v2 - scan.pose.position).norm());
    const int step = std::abs(pairs[i].index1 - pairs[i].index2);
    CHECK((step == 1 || step == scan.size() - 1));
  }
}

TEST_CASE("gap pairs: empty map has none") {
  const auto g = MapBuilder(400, 400, 0.05, {-10.0, -10.0}).build();
  const auto scan = simulate_scan(g, {{0.0, 0.0}, 0.0});
  CHECK(find_gap_pairs(scan).empty());
  // chord between neighbouring saturated rays
  const double chord = (scan.endpoint(1) - scan.endpoint(0)).norm();
  CHECK(chord == doctest::Approx(2.0 * 7.0 * std::sin(std::numbers::pi / 720.0)));
}

TEST_CASE("gap pairs: threshold is strict") {
  ScanConfig cfg;
  LaserScan scan{Pose2D{}, cfg, std::vector<double>(720, 2.0)};
  scan.ranges[360] = 1.0;  // straight ahead
  const double sep_a = (scan.endpoint(360) - scan.endpoint(359)).norm();
  const double sep_b = (scan.endpoint(361) - scan.endpoint(360)).norm();
  DetectionParams p;
  p.gap_threshold = std::max(sep_a, sep_b);
  const auto at = find_gap_pairs(scan, p);
  CHECK(at.size() == (sep_a == sep_b ? 0u : 1u));
  p.gap_threshold = std::nextafter(std::min(sep_a, sep_b), 0.0);
  const auto below = find_gap_pairs(scan, p);
  CHECK(below.size() == 2);
}

TEST_CASE("gap pairs: behind and far corners are filtered") {
  ScanConfig cfg;
  LaserScan scan{Pose2D{}, cfg, std::vector<double>(720, 7.0)};
  scan.ranges[10] = 1.0;   // behind the robot
  scan.ranges[400] = 6.0;  // ahead but beyond the front limit
  scan.ranges[380] = 3.0;  // ahead within range
  const auto pairs = find_gap_pairs(scan);
  REQUIRE(pairs.size() == 2);
  for (const auto& pair : pairs) CHECK(pair.index1 == 380);
}

TEST_CASE("select_corners") {
  VertexPair a;
  a.v1 = {2, 0};
  a.v2 = {5, 0};
  VertexPair b;
  b.v1 = {0, 1};
  b.v2 = {0, 3};
  const std::vector<VertexPair> pairs{a, b};
  const auto corners = select_corners(pairs);
  REQUIRE(corners.size() == 2);
  CHECK(corners[0] == a.v1);
  CHECK(corners[1] == b.v1);
  CHECK(select_corners({}).empty());
}

TEST_CASE("is_outside_contour") {
  const ScanConfig cfg;
  const LaserScan scan{Pose2D{}, cfg, std::vector<double>(720, 2.5)};
  CHECK(is_outside_contour(scan, {3.0, 0.0}));
  CHECK_FALSE(is_outside_contour(scan, {2.0, 0.0}));
  const LaserScan saturated{Pose2D{}, cfg, std::vector<double>(720, 7.0)};
  CHECK_FALSE(is_outside_contour(saturated, {7.0, 0.0}));
  // bearing is taken relative to the heading
  LaserScan turned{Pose2D{{1.0, 1.0}, std::numbers::pi / 2}, cfg, std::vector<double>(720, 7.0)};
  turned.ranges[static_cast<std::size_t>(nearest_ray(turned, 0.0))] = 1.0;
  CHECK(is_outside_contour(turned, {1.0, 3.0}));
  CHECK_FALSE(is_outside_contour(turned, {3.0, 1.0}));
}

TEST_CASE("one detection at a blind corner") {
  const auto g = left_turn();
  const DetectionParams p;
  const auto det = detect(g, {{2.0, 2.0}, 0.0}, p);
  REQUIRE(det.humans.size() == 1);
  check_sound(g, det, p);
  const auto& h = det.humans.front();
  // grazing rays land up to a few ray spacings short of the true corner
  CHECK((h.source_corner - WorldPoint(6.0, 3.0)).norm() < 0.2);
  // just around the corner, inside the crossing corridor
  CHECK(h.position.x() > 6.0);
  CHECK(h.position.y() > 3.0);
  // the oracle's feasible set contains a point within one walk step plus a cell
  const auto feasible = oracle::feasible_emergence_points(g, det.scan, p.h_rad, g.resolution() / 2);
  double nearest = 1e9;
  for (const auto& q : feasible) nearest = std::min(nearest, (q - h.position).norm());
  CHECK(nearest <= p.alpha * h.pair.separation + g.resolution());
}

TEST_CASE("closed convex room has no detections") {
  MapBuilder b(100, 100, 0.05);
  b.fill_rect({0.0, 0.0}, {5.0, 5.0});
  b.fill_disc({2.5, 2.5}, 2.0, false);
  const auto det = detect(b.build(), {{2.5, 2.5}, 0.3});
  CHECK(det.pairs.empty());
  CHECK(det.humans.empty());
}

TEST_CASE("doorway view: two detections on the gap edges") {
  const auto view = doorway_view();
  const DetectionParams p;
  const auto det = detect(view.grid, view.pose, p);
  REQUIRE(det.humans.size() == 2);
  check_sound(view.grid, det, p);
  for (const auto& h : det.humans)
    CHECK(segment_distance(h.pair.v1, h.pair.v2, h.position) <= p.offset() + 1e-9);
}

TEST_CASE("detect equals the staged pipeline and is deterministic") {
  const auto view = doorway_view();
  const DetectionParams p;
  const auto det = detect(view.grid, view.pose, p);
  const auto scan = simulate_scan(view.grid, view.pose);
  const auto pairs = find_gap_pairs(scan, p);
  const auto staged = locate_invisible_humans(view.grid, scan, pairs, p);
  REQUIRE(staged.size() == det.humans.size());
  for (std::size_t i = 0; i < staged.size(); ++i) CHECK(staged[i].position == det.humans[i].position);
  const auto again = detect(view.grid, view.pose, p);
  REQUIRE(again.humans.size() == det.humans.size());
  for (std::size_t i = 0; i < again.humans.size(); ++i)
    CHECK(again.humans[i].position == det.humans[i].position);

  const auto empty = MapBuilder(200, 200, 0.05, {-5.0, -5.0}).build();
  CHECK(detect(empty, {{0.0, 0.0}, 0.0}).humans.empty());
}

TEST_CASE("soundness on random mazes") {
  const DetectionParams p;
  Rng rng(51);
  int total = 0;
  for (int m = 0; m < 8; ++m) {
    const auto g = generate_maze(derive_seed(51, m), 64, 64, rng.uniform(1.0, 2.0));
    for (int tries = 0, poses = 0; poses < 3 && tries < 1000; ++tries) {
      const WorldPoint q = fixtures::random_point(rng, g);
      if (oracle::circle_overlaps(g, q, 0.5)) continue;
      ++poses;
      const auto det = detect(g, {q, rng.uniform(-3.1, 3.1)}, p);
      check_sound(g, det, p);
      total += static_cast<int>(det.humans.size());
    }
  }
  CHECK(total > 5);
}

TEST_CASE("probe-only mode skips the full disc test") {
  DetectionParams probes;
  probes.full_disc_check = false;
  DetectionParams full;
  // a centre free with probes clear can still clip a diagonal cell
  MapBuilder b(40, 40, 0.1);
  b.set_cell(22, 22);
  const auto g = b.build();
  const WorldPoint foot(1.5, 2.0);
  const WorldPoint h(2.0, 2.0);
  CHECK(candidate_fits(g, foot, h, probes));
  CHECK_FALSE(candidate_fits(g, foot, h, full));
}

TEST_CASE("parameter validation") {
  DetectionParams bad;
  bad.k = 0;
  CHECK_THROWS(bad.validate());
  DetectionParams neg;
  neg.h_rad = -1.0;
  CHECK_THROWS(neg.validate());
  const DetectionParams d;
  CHECK(d.epsilon == doctest::Approx(d.h_rad / 2));
  CHECK(d.step() == doctest::Approx(0.09));
}
