#pragma once

#include <string>
#include <vector>

#include "fracurv/config.hpp"

namespace fracurv {

/// Names of the bundled run descriptions.
const std::vector<std::string>& preset_names();

/// The bundled config for `name`; throws std::invalid_argument listing the
/// available names when it does not exist. Every preset passes
/// validate_config.
RunConfig preset(const std::string& name);

}  // namespace fracurv
