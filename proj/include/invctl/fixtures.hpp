#pragma once

#include "invctl/scenario.hpp"

#include <optional>
#include <string_view>
#include <vector>

namespace invctl {

/// The eight reference experiments, S1..S8.
///
/// Plant, controller and noise parameters are the published ones. Initial
/// inventory (0), the smoothed-step references, base demand levels, the step program
/// of S7 and run durations are choices of this repository; the published
/// experiments do not state them.
const std::vector<ScenarioConfig>& builtin_scenarios();

std::optional<ScenarioConfig> find_builtin(std::string_view id);

} // namespace invctl
