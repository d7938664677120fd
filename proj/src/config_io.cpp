#include "occnav/config_io.hpp"

namespace occnav {

namespace {

template <typename T>
void read(const nlohmann::json& j, const char* key, T& field) {
  if (j.contains(key)) field = j.at(key).get<T>();
}

}  // namespace

void update_from_json(const nlohmann::json& j, DetectionParams& p) {
  read(j, "gap_threshold", p.gap_threshold);
  read(j, "h_rad", p.h_rad);
  read(j, "epsilon", p.epsilon);
  read(j, "alpha", p.alpha);
  read(j, "k", p.k);
  read(j, "front_limit", p.front_limit);
  read(j, "full_disc_check", p.full_disc_check);
  p.validate();
}

void update_from_json(const nlohmann::json& j, InvisibleCostParams& p) {
  read(j, "walking_speed", p.walking_speed);
  read(j, "deceleration", p.deceleration);
  read(j, "reaction_time", p.reaction_time);
  read(j, "decelerate_after_reaction", p.decelerate_after_reaction);
  p.validate();
}

void update_from_json(const nlohmann::json& j, PlanConfig& p) {
  read(j, "vmax", p.vmax);
  read(j, "vmax_passthrough", p.vmax_passthrough);
  read(j, "waypoint_count", p.waypoint_count);
  read(j, "horizon", p.horizon);
  read(j, "robot_radius", p.robot_radius);
  read(j, "obstacle_clearance", p.obstacle_clearance);
  read(j, "visible_clearance", p.visible_clearance);
  read(j, "iterations", p.iterations);
  read(j, "max_waypoint_step", p.max_waypoint_step);
  read(j, "cycle_period", p.cycle_period);
  read(j, "goal_tolerance", p.goal_tolerance);
  if (j.contains("weights")) {
    const auto& w = j.at("weights");
    read(w, "goal", p.weights.goal);
    read(w, "progress", p.weights.progress);
    read(w, "speed", p.weights.speed);
    read(w, "obstacle", p.weights.obstacle);
    read(w, "smoothness", p.weights.smoothness);
    read(w, "invisible", p.weights.invisible);
    read(w, "visible", p.weights.visible);
  }
  if (j.contains("invisible_model")) update_from_json(j.at("invisible_model"), p.invisible_model);
  p.validate();
}

void update_from_json(const nlohmann::json& j, PassageLimits& p) {
  read(j, "base_max", p.base_max);
  read(j, "base_min", p.base_min);
  read(j, "side_max", p.side_max);
  read(j, "side_min", p.side_min);
  read(j, "isosceles_tol", p.isosceles_tol);
  read(j, "wall_diff_max", p.wall_diff_max);
  p.validate();
}

void update_from_json(const nlohmann::json& j, ControllerConfig& p) {
  if (j.contains("detection")) update_from_json(j.at("detection"), p.detection);
  if (j.contains("plan")) update_from_json(j.at("plan"), p.plan);
  if (j.contains("passage")) update_from_json(j.at("passage"), p.passage);
  if (j.contains("scan")) {
    const auto& s = j.at("scan");
    read(s, "ray_count", p.scan.ray_count);
    read(s, "angle_min", p.scan.angle_min);
    read(s, "angle_max", p.scan.angle_max);
    read(s, "max_range", p.scan.max_range);
    read(s, "front_limit", p.scan.front_limit);
    p.scan.validate();
  }
}

nlohmann::json to_json_value(const ControllerConfig& p) {
  const auto& d = p.detection;
  const auto& c = p.plan;
  const auto& m = c.invisible_model;
  return {
      {"detection",
       {{"gap_threshold", d.gap_threshold}, {"h_rad", d.h_rad}, {"epsilon", d.epsilon},
        {"alpha", d.alpha}, {"k", d.k}, {"front_limit", d.front_limit},
        {"full_disc_check", d.full_disc_check}}},
      {"plan",
       {{"vmax", c.vmax},
        {"vmax_passthrough", c.vmax_passthrough},
        {"waypoint_count", c.waypoint_count},
        {"horizon", c.horizon},
        {"robot_radius", c.robot_radius},
        {"obstacle_clearance", c.obstacle_clearance},
        {"visible_clearance", c.visible_clearance},
        {"iterations", c.iterations},
        {"max_waypoint_step", c.max_waypoint_step},
        {"cycle_period", c.cycle_period},
        {"goal_tolerance", c.goal_tolerance},
        {"weights",
         {{"goal", c.weights.goal}, {"progress", c.weights.progress}, {"speed", c.weights.speed},
          {"obstacle", c.weights.obstacle},
          {"smoothness", c.weights.smoothness}, {"invisible", c.weights.invisible},
          {"visible", c.weights.visible}}},
        {"invisible_model",
         {{"walking_speed", m.walking_speed}, {"deceleration", m.deceleration},
          {"reaction_time", m.reaction_time},
          {"decelerate_after_reaction", m.decelerate_after_reaction}}}}},
      {"passage",
       {{"base_max", p.passage.base_max}, {"base_min", p.passage.base_min},
        {"side_max", p.passage.side_max}, {"side_min", p.passage.side_min},
        {"isosceles_tol", p.passage.isosceles_tol}, {"wall_diff_max", p.passage.wall_diff_max}}},
      {"scan",
       {{"ray_count", p.scan.ray_count}, {"angle_min", p.scan.angle_min}, {"angle_max", p.scan.angle_max},
        {"max_range", p.scan.max_range}, {"front_limit", p.scan.front_limit}}},
  };
}

}  // namespace occnav
