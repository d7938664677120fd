#include "occnav/scenario.hpp"

#include "occnav/config_io.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace occnav {

void HumanScript::validate() const {
  if (knots.empty()) throw std::invalid_argument("human script: no knots");
  for (std::size_t i = 0; i < knots.size(); ++i) {
    if (!knots[i].allFinite()) throw std::invalid_argument("human script: non-finite knot");
    if (i > 0 && !(knots[i].z() > knots[i - 1].z()))
      throw std::invalid_argument("human script: knot times must strictly increase");
  }
}

WorldPoint HumanScript::position_at(double t) const {
  if (t <= knots.front().z()) return knots.front().head<2>();
  for (std::size_t i = 1; i < knots.size(); ++i) {
    if (t <= knots[i].z()) {
      const double f = (t - knots[i - 1].z()) / (knots[i].z() - knots[i - 1].z());
      return (1.0 - f) * knots[i - 1].head<2>() + f * knots[i].head<2>();
    }
  }
  return knots.back().head<2>();
}

Eigen::Vector2d HumanScript::velocity_at(double t) const {
  for (std::size_t i = 1; i < knots.size(); ++i) {
    if (t >= knots[i - 1].z() && t < knots[i].z())
      return (knots[i].head<2>() - knots[i - 1].head<2>()) / (knots[i].z() - knots[i - 1].z());
  }
  return Eigen::Vector2d::Zero();
}

void Scenario::validate() const {
  if (!map) throw std::invalid_argument("scenario: no map");
  if (!(duration_s > 0.0)) throw std::invalid_argument("scenario: duration must be positive");
  if (is_occupied(*map, start.position)) throw std::invalid_argument("scenario: start is occupied");
  if (is_occupied(*map, goal)) throw std::invalid_argument("scenario: goal is occupied");
  if (jitter.time_s < 0.0 || jitter.position_m < 0.0)
    throw std::invalid_argument("scenario: jitter must be non-negative");
  for (const auto& h : humans) h.validate();
  controller.plan.validate();
  controller.detection.validate();
  controller.passage.validate();
  controller.scan.validate();
}

std::vector<HumanScript> Scenario::jittered_humans() const {
  Rng rng(seed);
  std::vector<HumanScript> out = humans;
  for (auto& h : out) {
    const double dt = rng.uniform(-jitter.time_s, jitter.time_s);
    const double dx = rng.uniform(-jitter.position_m, jitter.position_m);
    const double dy = rng.uniform(-jitter.position_m, jitter.position_m);
    for (auto& k : h.knots) k += Eigen::Vector3d(dx, dy, dt);
  }
  return out;
}

Scenario load_scenario(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw std::invalid_argument(fmt::format("cannot open scenario {}", file.string()));
  const auto j = nlohmann::json::parse(in);

  Scenario s;
  s.name = j.value("name", file.stem().string());
  s.map_ref = j.at("map").get<std::string>();
  std::filesystem::path map_path = s.map_ref;
  if (map_path.is_relative()) map_path = file.parent_path() / map_path;
  s.map = std::make_shared<const OccupancyGrid>(load_map(map_path));

  const auto start = j.at("start").get<std::vector<double>>();
  if (start.size() < 2 || start.size() > 3) throw std::invalid_argument("scenario: start is [x, y, theta]");
  s.start = {{start[0], start[1]}, start.size() == 3 ? start[2] : 0.0};
  const auto goal = j.at("goal").get<std::vector<double>>();
  if (goal.size() < 2) throw std::invalid_argument("scenario: goal is [x, y]");
  s.goal = {goal[0], goal[1]};

  if (j.contains("humans")) {
    for (const auto& h : j.at("humans")) {
      HumanScript script;
      for (const auto& k : h.at("script")) {
        const auto v = k.get<std::vector<double>>();
        if (v.size() != 3) throw std::invalid_argument("scenario: script knots are [x, y, t]");
        script.knots.emplace_back(v[0], v[1], v[2]);
      }
      s.humans.push_back(std::move(script));
    }
  }
  if (j.contains("features")) {
    const auto& f = j.at("features");
    s.controller.invisible_cost = f.value("invisible_cost", true);
    s.controller.passage_mode = f.value("passage_mode", true);
  }
  if (j.contains("jitter")) {
    s.jitter.time_s = j.at("jitter").value("time_s", 0.0);
    s.jitter.position_m = j.at("jitter").value("position_m", 0.0);
  }
  s.seed = j.value("seed", std::uint64_t{0});
  s.duration_s = j.value("duration_s", 60.0);
  if (j.contains("params")) update_from_json(j.at("params"), s.controller);
  s.validate();
  return s;
}

void save_scenario(const Scenario& s, const std::filesystem::path& file) {
  nlohmann::json humans = nlohmann::json::array();
  for (const auto& h : s.humans) {
    nlohmann::json script = nlohmann::json::array();
    for (const auto& k : h.knots) script.push_back({k.x(), k.y(), k.z()});
    humans.push_back({{"script", script}});
  }
  const nlohmann::json j = {
      {"name", s.name},
      {"map", s.map_ref},
      {"start", {s.start.position.x(), s.start.position.y(), s.start.heading}},
      {"goal", {s.goal.x(), s.goal.y()}},
      {"humans", humans},
      {"features", {{"invisible_cost", s.controller.invisible_cost}, {"passage_mode", s.controller.passage_mode}}},
      {"jitter", {{"time_s", s.jitter.time_s}, {"position_m", s.jitter.position_m}}},
      {"seed", s.seed},
      {"duration_s", s.duration_s},
      {"params", to_json_value(s.controller)},
  };
  std::ofstream out(file);
  if (!out) throw std::runtime_error(fmt::format("cannot write {}", file.string()));
  out << j.dump(2) << '\n';
}

std::vector<WorldPoint> RunRecord::path() const {
  std::vector<WorldPoint> out;
  out.reserve(cycles.size());
  for (const auto& c : cycles) out.push_back(c.position);
  return out;
}

std::vector<double> RunRecord::speeds() const {
  std::vector<double> out;
  out.reserve(cycles.size());
  for (const auto& c : cycles) out.push_back(c.command.norm());
  return out;
}

double RunRecord::path_length() const {
  double total = 0.0;
  for (std::size_t i = 1; i < cycles.size(); ++i)
    total += (cycles[i].position - cycles[i - 1].position).norm();
  return total;
}

namespace {

World world_at(const std::vector<HumanScript>& humans, const WorldPoint& goal, double t) {
  World w;
  w.goal = goal;
  for (const auto& h : humans) w.humans.push_back({h.position_at(t), h.velocity_at(t)});
  return w;
}

int cycle_budget(const Scenario& s) {
  return static_cast<int>(std::ceil(s.duration_s / s.controller.plan.cycle_period - 1e-9));
}

void advance(Pose2D& pose, const Eigen::Vector2d& command, double dt) {
  pose.position += command * dt;
  if (command.norm() > 1e-3) pose.heading = std::atan2(command.y(), command.x());
}

}  // namespace

RunRecord run_scenario(const Scenario& s) {
  s.validate();
  const auto humans = s.jittered_humans();
  const LocalPlanner planner(*s.map, s.controller.plan);
  const double dt = s.controller.plan.cycle_period;

  RunRecord record;
  ControllerState state;
  state.pose = s.start;
  const int budget = cycle_budget(s);
  for (int cycle = 0; cycle <= budget; ++cycle) {
    state.time = cycle * dt;
    const World world = world_at(humans, s.goal, state.time);
    CycleResult result = control_cycle(state, planner, world, s.controller);
    record.min_human_distance = std::min(record.min_human_distance, result.diagnostics.min_dist_vis);
    record.cycles.push_back(std::move(result.diagnostics));
    if (result.goal_reached) {
      record.completed = true;
      break;
    }
    if (result.planning_failed) {
      record.planning_failed = true;
      break;
    }
    advance(state.pose, result.command, dt);
    state.since_plan = dt;
  }
  return record;
}

RunRecord run_naive_baseline(const Scenario& s) {
  s.validate();
  const auto humans = s.jittered_humans();
  const LocalPlanner planner(*s.map, s.controller.plan);
  const auto& cfg = s.controller.plan;
  const double dt = cfg.cycle_period;
  constexpr double lookahead = 0.5;

  RunRecord record;
  const auto path = planner.shortest_path(s.start.position, s.goal);
  Pose2D pose = s.start;
  std::size_t progress = 0;
  const int budget = cycle_budget(s);
  for (int cycle = 0; cycle <= budget; ++cycle) {
    CycleDiagnostics diag;
    diag.t = cycle * dt;
    diag.position = pose.position;
    for (const auto& h : humans)
      diag.min_dist_vis = std::min(diag.min_dist_vis, (h.position_at(diag.t) - pose.position).norm());
    record.min_human_distance = std::min(record.min_human_distance, diag.min_dist_vis);

    if ((s.goal - pose.position).norm() < cfg.goal_tolerance) {
      record.cycles.push_back(diag);
      record.completed = true;
      break;
    }
    if (path.empty()) {
      record.cycles.push_back(diag);
      record.planning_failed = true;
      break;
    }
    while (progress + 1 < path.size() &&
           (path[progress + 1] - pose.position).norm() <= (path[progress] - pose.position).norm())
      ++progress;
    std::size_t target = progress;
    while (target + 1 < path.size() && (path[target] - pose.position).norm() < lookahead) ++target;
    const WorldPoint to_target = path[target] - pose.position;
    const double reach = to_target.norm();
    Eigen::Vector2d command = Eigen::Vector2d::Zero();
    if (reach > 0.0) command = to_target / reach * std::min(cfg.vmax, reach / dt);
    diag.command = command;
    record.cycles.push_back(diag);
    advance(pose, command, dt);
  }
  return record;
}

namespace {

std::string number_or_na(double v) {
  return std::isfinite(v) ? fmt::format("{:.6f}", v) : std::string("NA");
}

}  // namespace

void write_record_csv(const RunRecord& record, std::ostream& out) {
  out << "t,x,y,vx,vy,mode,n_detections,min_dist_inv,min_dist_vis\n";
  for (const auto& c : record.cycles) {
    out << fmt::format("{:.3f},{:.6f},{:.6f},{:.6f},{:.6f},{},{},{},{}\n", c.t, c.position.x(),
                       c.position.y(), c.command.x(), c.command.y(), to_string(c.mode),
                       c.detections.size(), number_or_na(c.min_dist_inv), number_or_na(c.min_dist_vis));
  }
}

std::vector<RecordRow> read_record_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("t,x,y", 0) != 0)
    throw std::invalid_argument("record csv: missing header");
  std::vector<RecordRow> rows;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) f.push_back(cell);
    if (f.size() != 9) throw std::invalid_argument(fmt::format("record csv: line {} needs 9 fields", line_no));
    auto num = [&](const std::string& v) {
      if (v == "NA") return std::numeric_limits<double>::quiet_NaN();
      std::size_t used = 0;
      const double x = std::stod(v, &used);
      if (used != v.size()) throw std::invalid_argument(fmt::format("record csv: bad number on line {}", line_no));
      return x;
    };
    RecordRow r;
    r.t = num(f[0]);
    r.position = {num(f[1]), num(f[2])};
    r.velocity = {num(f[3]), num(f[4])};
    r.mode = f[5];
    r.n_detections = std::stoi(f[6]);
    r.min_dist_inv = num(f[7]);
    r.min_dist_vis = num(f[8]);
    rows.push_back(r);
  }
  return rows;
}

}  // namespace occnav
