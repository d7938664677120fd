#pragma once

#include "occnav/controller.hpp"

#include <json.hpp>

namespace occnav {

// Partial updates: keys absent from the JSON keep their current values.
void update_from_json(const nlohmann::json& j, DetectionParams& p);
void update_from_json(const nlohmann::json& j, InvisibleCostParams& p);
void update_from_json(const nlohmann::json& j, PlanConfig& p);
void update_from_json(const nlohmann::json& j, PassageLimits& p);
/// Keys: detection, plan, passage, invisible_model (nested objects).
void update_from_json(const nlohmann::json& j, ControllerConfig& p);

nlohmann::json to_json_value(const ControllerConfig& p);

}  // namespace occnav
