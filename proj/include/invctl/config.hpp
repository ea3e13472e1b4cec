#pragma once

#include "invctl/scenario.hpp"

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace invctl {

// Scenario files are flat "key = value" text. '#' starts a comment. Keys are
// sectioned by prefix (plant.dt) or by a preceding "[plant]" header line.
// Unknown or repeated keys are errors. List-valued keys take "t:value" pairs
// separated by commas, e.g. reference.knots = 0:0, 10:0, 30:100.
//
// Required: duration, plant.yield, plant.lead_time, plant.dt, plant.y0,
// controller.variant, controller.gain, reference.knots, demand.steps.

/// Throws ConfigError with the source name and line number.
ScenarioConfig parse_scenario(std::string_view text, std::string_view source = "<string>");
ScenarioConfig load_scenario_file(const std::filesystem::path& path);

/// Canonical text form; parse_scenario(format_scenario(c)) == c.
std::string format_scenario(const ScenarioConfig& cfg);

/// Sets one key on an existing config (same keys and value syntax as the
/// file format). Throws ConfigError on unknown keys or bad values.
void apply_setting(ScenarioConfig& cfg, std::string_view key, std::string_view value);

const std::vector<std::string>& setting_keys();

} // namespace invctl
