#include "fixtures.hpp"
#include "oracles.hpp"

#include "occnav/evaluation.hpp"
#include "occnav/maze.hpp"
#include "occnav/render.hpp"
#include "occnav/scenario.hpp"
#include "occnav/scenes.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <regex>
#include <set>
#include <sstream>

using namespace occnav;

namespace {

int count(const std::string& text, const std::string& needle) {
  int n = 0;
  for (std::size_t at = text.find(needle); at != std::string::npos; at = text.find(needle, at + 1)) ++n;
  return n;
}

std::string record_csv(const RunRecord& r) {
  std::ostringstream out;
  write_record_csv(r, out);
  return out.str();
}

InvisibleHuman human_at(const WorldPoint& p) {
  InvisibleHuman h;
  h.position = p;
  return h;
}

}  // namespace

TEST_CASE("maze: deterministic, connected, distinct") {
  const auto a = generate_maze(1, 64, 64, 1.5);
  const auto b = generate_maze(1, 64, 64, 1.5);
  CHECK(a.cells() == b.cells());

  std::set<std::uint64_t> prints;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto g = generate_maze(seed, 64, 64, 1.0);
    prints.insert(g.fingerprint());
    int sx = -1, sy = -1;
    const int free_cells = g.width() * g.height() - static_cast<int>(g.occupied_count());
    REQUIRE(free_cells > 0);
    for (int y = 0; y < g.height() && sx < 0; ++y)
      for (int x = 0; x < g.width(); ++x)
        if (!g.occupied(x, y)) {
          sx = x;
          sy = y;
          break;
        }
    CHECK(oracle::flood_count(g, sx, sy) == free_cells);
  }
  CHECK(prints.size() == 100);

  Rng rng(91);
  for (int i = 0; i < 30; ++i) {
    const auto g = generate_maze(static_cast<std::uint64_t>(i), 64, 64, rng.uniform(1.0, 2.0));
    for (int c = 0; c < g.width() * g.height(); ++c) {
      if (g.occupied(c % g.width(), c / g.width())) continue;
      CHECK(oracle::flood_count(g, c % g.width(), c / g.width()) ==
            g.width() * g.height() - static_cast<int>(g.occupied_count()));
      break;
    }
  }
}

TEST_CASE("maze: corridor width and degenerate sizes") {
  const auto g = generate_maze(3, 64, 64, 1.0, 0.1);
  CHECK(g.occupied_count() < static_cast<std::size_t>(64 * 64 / 2));
  // a 10-cell corridor fits a 0.45 m disc somewhere
  bool fits = false;
  for (int y = 0; y < g.height() && !fits; ++y)
    for (int x = 0; x < g.width() && !fits; ++x)
      fits = !oracle::circle_overlaps(g, g.cell_center(x, y), 0.45);
  CHECK(fits);
  CHECK_THROWS(generate_maze(1, 0, 10, 1.0));
  CHECK_THROWS(generate_maze(1, 64, 64, 0.0));
}

TEST_CASE("labels") {
  MapBuilder m(40, 40, 0.1);
  m.fill_rect({2.0, 0.0}, {4.0, 4.0});
  const auto g = m.build();
  const std::vector<InvisibleHuman> dets{human_at({2.5, 2.0}), human_at({1.8, 2.0}), human_at({1.0, 2.0})};
  const auto labels = label_detections(g, dets, 0.3);
  REQUIRE(labels.size() == 3);
  CHECK(labels[0].kind == LabelKind::FalsePositive);
  CHECK(labels[1].kind == LabelKind::Overlap);
  CHECK(labels[2].kind == LabelKind::TruePositive);
  CHECK(to_string(LabelKind::Overlap) == "Overlap");
}

TEST_CASE("accuracy counts") {
  AccuracyCounts c;
  CHECK(std::isnan(c.accuracy()));
  c.true_positive = 6;
  c.overlap = 3;
  c.false_positive = 1;
  CHECK(c.accuracy() == doctest::Approx(0.6));
  CHECK(c.accuracy_with_overlap() == doctest::Approx(0.9));
}

TEST_CASE("accuracy experiment") {
  CHECK_THROWS(accuracy_experiment(0, 1));
  const auto a = accuracy_experiment(12, 3);
  const auto b = accuracy_experiment(12, 3);
  std::ostringstream sa, sb;
  write_accuracy_csv(a, sa);
  write_accuracy_csv(b, sb);
  CHECK(sa.str() == sb.str());
  REQUIRE(a.rows.size() == 12);
  int tp = 0, fp = 0, ov = 0;
  for (const auto& r : a.rows) {
    tp += r.true_positive;
    fp += r.false_positive;
    ov += r.overlap;
  }
  CHECK(a.aggregate.true_positive == tp);
  CHECK(a.aggregate.false_positive == fp);
  CHECK(a.aggregate.overlap == ov);
  // the full disc check in detection rules out both failure labels
  CHECK(fp == 0);
  CHECK(ov == 0);
  CHECK(a.aggregate.total() > 0);
  CHECK(a.aggregate.accuracy_with_overlap() >= a.aggregate.accuracy());

  BenchOptions probes;
  probes.detection.full_disc_check = false;
  const auto p = accuracy_experiment(12, 3, probes);
  CHECK(p.aggregate.accuracy_with_overlap() >= p.aggregate.accuracy());
  CHECK(p.aggregate.false_positive == 0);
}

TEST_CASE("accuracy csv layout") {
  const auto r = accuracy_experiment(3, 4);
  std::ostringstream out;
  write_accuracy_csv(r, out);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  CHECK(line.rfind("#", 0) == 0);
  std::getline(in, line);
  CHECK(line.rfind("#", 0) == 0);
  std::getline(in, line);
  CHECK(line ==
        "map,map_seed,fingerprint,corridor_width,x,y,theta,detections,true_positive,false_positive,overlap,accuracy,"
        "accuracy_with_overlap");
  int rows = 0;
  std::string last;
  while (std::getline(in, line)) {
    ++rows;
    last = line;
  }
  CHECK(rows == 4);
  CHECK(last.rfind("all,", 0) == 0);
}

TEST_CASE("human scripts") {
  HumanScript h;
  h.knots = {{0.0, 0.0, 1.0}, {2.0, 0.0, 3.0}};
  CHECK(h.position_at(0.0) == WorldPoint(0.0, 0.0));
  CHECK(h.position_at(2.0).x() == doctest::Approx(1.0));
  CHECK(h.position_at(9.0) == WorldPoint(2.0, 0.0));
  CHECK(h.velocity_at(2.0).x() == doctest::Approx(1.0));
  CHECK(h.velocity_at(0.5).norm() == 0.0);
  CHECK(h.velocity_at(5.0).norm() == 0.0);
  HumanScript bad;
  bad.knots = {{0.0, 0.0, 1.0}, {1.0, 0.0, 1.0}};
  CHECK_THROWS(bad.validate());
  CHECK_THROWS(HumanScript{}.validate());
}

TEST_CASE("jitter is seeded and bounded") {
  auto s = emergence_scenario(4);
  const auto a = s.jittered_humans();
  const auto b = s.jittered_humans();
  REQUIRE(a.size() == 1);
  CHECK(a[0].knots == b[0].knots);
  const auto base = s.humans[0].knots[0];
  CHECK(std::abs(a[0].knots[0].x() - base.x()) <= s.jitter.position_m);
  CHECK(std::abs(a[0].knots[0].z() - base.z()) <= s.jitter.time_s);
  s.seed = 5;
  CHECK(s.jittered_humans()[0].knots != a[0].knots);
}

TEST_CASE("scenario files round trip") {
  const auto dir = std::filesystem::temp_directory_path() / "occnav_test_scenario";
  std::filesystem::create_directories(dir);
  const Scenario s = emergence_scenario(2);
  save_map(*s.map, dir / s.map_ref);
  save_scenario(s, dir / "e.json");
  const Scenario back = load_scenario(dir / "e.json");
  CHECK(back.name == s.name);
  CHECK(back.map->cells() == s.map->cells());
  CHECK(back.start.position == s.start.position);
  CHECK(back.goal == s.goal);
  CHECK(back.seed == 2);
  CHECK(back.humans.size() == 1);
  CHECK(back.controller.plan.weights.invisible == s.controller.plan.weights.invisible);
  CHECK(back.jitter.time_s == s.jitter.time_s);
  CHECK(record_csv(run_scenario(back)) == record_csv(run_scenario(s)));
}

TEST_CASE("scenario file errors") {
  const auto dir = std::filesystem::temp_directory_path() / "occnav_test_scenario_bad";
  std::filesystem::create_directories(dir);
  const Scenario s = empty_scenario();
  save_map(*s.map, dir / s.map_ref);
  auto write = [&](const std::string& name, const std::string& text) {
    std::ofstream(dir / name) << text;
    return dir / name;
  };
  CHECK_THROWS(load_scenario(dir / "missing.json"));
  CHECK_THROWS(load_scenario(write("a.json", "{not json")));
  CHECK_THROWS(load_scenario(write("b.json", R"({"map": "empty.txt", "start": [1, 3], "goal": [0.0, 0.0]})")));
  CHECK_THROWS(load_scenario(write("c.json", R"({"map": "nope.txt", "start": [1, 3], "goal": [5, 3]})")));
  CHECK_THROWS(load_scenario(write("d.json", R"({"map": "empty.txt", "start": [1], "goal": [5, 3]})")));
  CHECK_NOTHROW(load_scenario(write("e.json", R"({"map": "empty.txt", "start": [1, 3], "goal": [5, 3]})")));
}

TEST_CASE("empty map run is straight") {
  const Scenario s = empty_scenario();
  const auto r = run_scenario(s);
  CHECK(r.completed);
  CHECK_FALSE(r.planning_failed);
  const double euclid = (s.goal - s.start.position).norm();
  CHECK(r.path_length() <= 1.02 * euclid);
  CHECK(r.path_length() >= euclid - 0.1 - 1e-9);
  for (std::size_t i = 1; i < r.cycles.size(); ++i) CHECK(r.cycles[i].t > r.cycles[i - 1].t);
}

TEST_CASE("doorway run slows near the door") {
  const Scenario s = doorway_scenario();
  const DoorwayGeometry door;
  const auto r = run_scenario(s);
  CHECK(r.completed);
  double near_door = 1e9;
  for (const auto& c : r.cycles)
    if (std::abs(c.position.x() - door.wall_x) <= 1.0) near_door = std::min(near_door, c.command.norm());
  CHECK(near_door < 0.3);
}

TEST_CASE("runs are bit-identical") {
  const Scenario s = emergence_scenario(3);
  CHECK(record_csv(run_scenario(s)) == record_csv(run_scenario(s)));
}

TEST_CASE("emergence: constraint keeps more distance") {
  Scenario on = emergence_scenario(1);
  Scenario off = on;
  off.controller.invisible_cost = false;
  off.controller.passage_mode = false;
  const auto a = run_scenario(on);
  const auto b = run_scenario(off);
  CHECK(a.min_human_distance > b.min_human_distance);
  CHECK(b.min_human_distance > run_naive_baseline(on).min_human_distance);
}

TEST_CASE("record csv round trip") {
  const auto r = run_scenario(emergence_scenario(1));
  const std::string text = record_csv(r);
  CHECK(text.rfind("t,x,y,vx,vy,mode,n_detections,min_dist_inv,min_dist_vis\n", 0) == 0);
  std::istringstream in(text);
  const auto rows = read_record_csv(in);
  REQUIRE(rows.size() == r.cycles.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].position.x() == doctest::Approx(r.cycles[i].position.x()).epsilon(1e-6));
    CHECK(rows[i].n_detections == static_cast<int>(r.cycles[i].detections.size()));
    if (!std::isfinite(r.cycles[i].min_dist_inv)) CHECK(std::isnan(rows[i].min_dist_inv));
  }
  std::istringstream bad("t,x\n1,2\n");
  CHECK_THROWS(read_record_csv(bad));
}

TEST_CASE("render") {
  const auto view = doorway_view();
  RenderInput map_only;
  map_only.map = &view.grid;
  const std::string empty = render_svg(map_only);
  CHECK(empty.rfind("<svg", 0) == 0);
  CHECK(empty.find("</svg>") != std::string::npos);
  CHECK(count(empty, "<polyline") == 0);
  CHECK(count(empty, "class=\"map\"") == 1);

  std::vector<RecordRow> rows(7);
  for (int i = 0; i < 7; ++i) rows[static_cast<std::size_t>(i)].position = WorldPoint(1.0 + i, 2.0);
  const auto det = detect(view.grid, view.pose);
  RenderInput full;
  full.map = &view.grid;
  full.path = rows;
  full.detections = det.humans;
  const std::string svg = render_svg(full);
  CHECK(count(svg, "<polyline") == 1);
  const std::regex points("points=\"([^\"]*)\"");
  std::smatch m;
  REQUIRE(std::regex_search(svg, m, points));
  CHECK(count(m[1].str(), ",") == 7);
  CHECK(count(svg, "class=\"arrow\"") == static_cast<int>(det.humans.size()));
  const auto group = svg.substr(svg.find("class=\"detections\""));
  CHECK(count(group.substr(0, group.find("</g>")), "<circle") == static_cast<int>(det.humans.size()));
  CHECK(svg.find("rgb(40,60,240)") < svg.find("rgb(240,60,40)"));
  CHECK(svg.find("rgb(240,60,40)") != std::string::npos);
}
