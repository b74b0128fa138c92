#pragma once

#include <memory>
#include <string>

#include "dcop/engine.hpp"

namespace dcop {

/// Builds an algorithm from its JSON config, e.g. {"algo":"dgls","manner":"M",
/// "gamma":0.5,"scope":"col"}. Recognized "algo" values: dsa, mgm, mgm2, dgls,
/// gdba, dms. Unknown keys or invalid values throw std::invalid_argument.
std::unique_ptr<Algorithm> make_algorithm(const std::string& config_json);

}  // namespace dcop
