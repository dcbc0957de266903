#pragma once
#include <string>

#include <json.hpp>

#include "gossipsim/scenario.hpp"

namespace gossipsim {

// JSON shape mirrors ScenarioConfig. Durations are milliseconds (reals
// accepted), bandwidths are bits per second. Unknown keys are an error;
// the message suggests the nearest known key.

nlohmann::json config_to_json(const ScenarioConfig& cfg);
ScenarioConfig config_from_json(const nlohmann::json& j);

// Defaults overlaid with the contents of a JSON file.
ScenarioConfig load_config_file(const std::string& path);

// Applies one "dotted.key=value" override on top of a config JSON.
// Values parse as JSON first (numbers, bools, arrays) and fall back to
// bare strings.
void apply_override(nlohmann::json& j, const std::string& assignment);

}  // namespace gossipsim
