#pragma once

#include "magnonet/config.hpp"

#include <string>
#include <vector>

namespace magnonet {

/// "fig2" .. "fig7".
std::vector<std::string> preset_ids();

/// Built-in configuration reproducing one figure. fig2..fig6 carry a sweep
/// block, fig7 a temperature_sweep block. Throws std::invalid_argument for an
/// unknown id.
RunConfig preset_config(const std::string& id);

}  // namespace magnonet
