#include "occnav/config_io.hpp"
#include "occnav/evaluation.hpp"
#include "occnav/render.hpp"
#include "occnav/scenario.hpp"
#include "occnav/scenes.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using namespace occnav;

namespace {

constexpr int kOk = 0;
constexpr int kInputError = 1;
constexpr int kPlanningFailure = 2;

Pose2D parse_pose(const std::string& text) {
  std::vector<double> v;
  std::stringstream ss(text);
  for (std::string part; std::getline(ss, part, ',');) {
    std::size_t used = 0;
    v.push_back(std::stod(part, &used));
    if (used != part.size()) throw std::invalid_argument("pose: expected X,Y,THETA");
  }
  if (v.size() != 3) throw std::invalid_argument("pose: expected X,Y,THETA");
  return {{v[0], v[1]}, v[2]};
}

nlohmann::json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument(fmt::format("cannot open {}", path));
  return nlohmann::json::parse(in);
}

// Flat detection keys, or nested "detection" / "scan" / "passage" objects.
ControllerConfig read_params(const std::string& path) {
  ControllerConfig cfg;
  if (path.empty()) return cfg;
  const auto j = read_json(path);
  update_from_json(j, cfg);
  update_from_json(j, cfg.detection);
  return cfg;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::invalid_argument(fmt::format("cannot write {}", path));
  out << text;
}

nlohmann::json detections_json(const std::vector<InvisibleHuman>& humans) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& h : humans) {
    arr.push_back({{"x", h.position.x()},
                   {"y", h.position.y()},
                   {"direction", h.direction},
                   {"corner_x", h.source_corner.x()},
                   {"corner_y", h.source_corner.y()},
                   {"distance", h.distance_to_robot}});
  }
  return arr;
}

std::vector<InvisibleHuman> detections_from_json(const nlohmann::json& arr) {
  std::vector<InvisibleHuman> out;
  for (const auto& d : arr) {
    InvisibleHuman h;
    h.position = {d.at("x").get<double>(), d.at("y").get<double>()};
    h.direction = d.value("direction", 0.0);
    h.source_corner = {d.value("corner_x", 0.0), d.value("corner_y", 0.0)};
    h.distance_to_robot = d.value("distance", 0.0);
    out.push_back(h);
  }
  return out;
}

nlohmann::json passage_json(const PassageClass& cls) {
  nlohmann::json j = {{"kind", std::string(to_string(cls.kind))}};
  if (cls.anchor)
    j["anchor"] = {cls.anchor->x(), cls.anchor->y()};
  else
    j["anchor"] = nullptr;
  nlohmann::json vertices = nlohmann::json::array();
  for (const auto& v : cls.vertices) vertices.push_back({v.x(), v.y()});
  j["vertices"] = vertices;
  const PlanDirective d = passage_directive(cls);
  j["mode"] = std::string(to_string(d.mode));
  return j;
}

nlohmann::json summary_json(const Scenario& s, const RunRecord& r, const std::string& controller) {
  double min_speed = std::numeric_limits<double>::infinity();
  for (double v : r.speeds()) min_speed = std::min(min_speed, v);
  auto finite = [](double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); };
  return {{"scenario", s.name},
          {"controller", controller},
          {"seed", s.seed},
          {"completed", r.completed},
          {"planning_failed", r.planning_failed},
          {"cycles", r.cycles.size()},
          {"duration_s", r.cycles.empty() ? 0.0 : r.cycles.back().t},
          {"path_length_m", r.path_length()},
          {"min_human_distance_m", finite(r.min_human_distance)},
          {"min_speed_mps", finite(min_speed)}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Occlusion-aware navigation toolkit"};
  app.require_subcommand(1);

  std::string map_file, pose_text, params_file, out_format = "json";
  auto add_view_flags = [&](CLI::App* cmd) {
    cmd->add_option("--map", map_file, "ASCII map or P5 PGM (with <stem>.yaml)")->required();
    cmd->add_option("--pose", pose_text, "robot pose X,Y,THETA")->required();
    cmd->add_option("--params", params_file, "JSON parameter file");
  };

  auto* scan_cmd = app.add_subcommand("scan", "emulate a laser scan, CSV on stdout");
  add_view_flags(scan_cmd);

  auto* detect_cmd = app.add_subcommand("detect", "locate invisible humans");
  add_view_flags(detect_cmd);
  detect_cmd->add_option("--out", out_format, "json, csv or svg")->check(CLI::IsMember({"json", "csv", "svg"}));

  auto* classify_cmd = app.add_subcommand("classify", "classify the passage ahead, JSON on stdout");
  add_view_flags(classify_cmd);

  std::string scenario_file, out_dir, controller = "planner";
  auto* sim_cmd = app.add_subcommand("simulate", "run a scenario");
  sim_cmd->add_option("--scenario", scenario_file)->required();
  sim_cmd->add_option("--out-dir", out_dir)->required();
  sim_cmd->add_option("--controller", controller, "planner or naive")->check(CLI::IsMember({"planner", "naive"}));

  int n_maps = 100;
  std::uint64_t seed = 0;
  std::string report_file;
  bool probe_only = false;
  BenchOptions bench_options;
  auto* bench_cmd = app.add_subcommand("bench", "detection accuracy over random mazes");
  bench_cmd->add_option("--n", n_maps)->check(CLI::PositiveNumber);
  bench_cmd->add_option("--seed", seed);
  bench_cmd->add_option("--out", report_file)->required();
  bench_cmd->add_option("--size", bench_options.width, "maze side in cells")->check(CLI::Range(8, 4096));
  bench_cmd->add_flag("--probe-only", probe_only, "centre and lateral probes only, no full disc check");

  std::string record_file, svg_file, detections_file;
  auto* render_cmd = app.add_subcommand("render", "SVG of a run record");
  render_cmd->add_option("--in", record_file)->required();
  render_cmd->add_option("--out", svg_file)->required();
  render_cmd->add_option("--map", map_file);
  render_cmd->add_option("--detections", detections_file, "detect JSON output");

  auto* scenes_cmd = app.add_subcommand("scenes", "write the canonical scenarios and maps");
  scenes_cmd->add_option("--out-dir", out_dir)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInputError;
  }

  try {
    if (*scan_cmd || *detect_cmd || *classify_cmd) {
      const OccupancyGrid grid = load_map(map_file);
      const Pose2D pose = parse_pose(pose_text);
      const ControllerConfig cfg = read_params(params_file);
      if (*scan_cmd) {
        write_scan_csv(simulate_scan(grid, pose, cfg.scan), std::cout);
        return kOk;
      }
      const Detection det = detect(grid, pose, cfg.detection, cfg.scan);
      if (*classify_cmd) {
        std::cout << passage_json(classify_passage(det.humans, det.scan, cfg.passage)).dump(2) << '\n';
        return kOk;
      }
      if (out_format == "json") {
        std::cout << detections_json(det.humans).dump(2) << '\n';
      } else if (out_format == "csv") {
        std::cout << "x,y,direction,corner_x,corner_y,distance\n";
        for (const auto& h : det.humans)
          std::cout << fmt::format("{:.6f},{:.6f},{:.6f},{:.6f},{:.6f},{:.6f}\n", h.position.x(), h.position.y(),
                                   h.direction, h.source_corner.x(), h.source_corner.y(), h.distance_to_robot);
      } else {
        RenderInput in;
        in.map = &grid;
        in.detections = det.humans;
        in.robot = pose;
        std::cout << render_svg(in);
      }
      return kOk;
    }

    if (*sim_cmd) {
      const Scenario s = load_scenario(scenario_file);
      const RunRecord r = controller == "naive" ? run_naive_baseline(s) : run_scenario(s);
      fs::create_directories(out_dir);
      const fs::path dir(out_dir);
      std::ostringstream csv;
      write_record_csv(r, csv);
      write_text((dir / "record.csv").string(), csv.str());
      write_text((dir / "summary.json").string(), summary_json(s, r, controller).dump(2) + "\n");
      std::istringstream rows_in(csv.str());
      const auto rows = read_record_csv(rows_in);
      RenderInput in;
      in.map = s.map.get();
      in.path = rows;
      write_text((dir / "path.svg").string(), render_svg(in));
      if (r.planning_failed) {
        std::cerr << "planning failure: no collision-free trajectory\n";
        return kPlanningFailure;
      }
      return kOk;
    }

    if (*bench_cmd) {
      bench_options.height = bench_options.width;
      bench_options.detection.full_disc_check = !probe_only;
      const AccuracyReport report = accuracy_experiment(n_maps, seed, bench_options);
      std::ostringstream csv;
      write_accuracy_csv(report, csv);
      write_text(report_file, csv.str());
      return kOk;
    }

    if (*render_cmd) {
      std::ifstream in(record_file);
      if (!in) throw std::invalid_argument(fmt::format("cannot open {}", record_file));
      const auto rows = read_record_csv(in);
      std::optional<OccupancyGrid> grid;
      if (!map_file.empty()) grid = load_map(map_file);
      std::vector<InvisibleHuman> detections;
      if (!detections_file.empty()) detections = detections_from_json(read_json(detections_file));
      RenderInput input;
      input.map = grid ? &*grid : nullptr;
      input.path = rows;
      input.detections = detections;
      write_text(svg_file, render_svg(input));
      return kOk;
    }

    if (*scenes_cmd) {
      fs::create_directories(out_dir);
      const fs::path dir(out_dir);
      for (const auto& s : canonical_scenarios()) {
        save_map(*s.map, dir / s.map_ref);
        save_scenario(s, dir / (s.name + ".json"));
        Scenario off = s;
        off.controller.invisible_cost = false;
        off.controller.passage_mode = false;
        save_scenario(off, dir / (s.name + "_off.json"));
      }
      return kOk;
    }
  } catch (const PlanningFailure& e) {
    std::cerr << "planning failure: " << e.what() << '\n';
    return kPlanningFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  }
  return kOk;
}
