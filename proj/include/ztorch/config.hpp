#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "ztorch/engine.hpp"

namespace ztorch {

/// Reads a scenario from INI text. Sections: workload, nodes, affinity,
/// placement, monitoring, epoch, qlearning, engine. Keys left out keep their
/// defaults; unknown sections or keys are rejected by name.
ScenarioConfig parse_scenario(std::istream& is, const std::string& source = "<stream>");
ScenarioConfig load_scenario(const std::filesystem::path& path);

/// Writes every key with its current value; parse_scenario reads it back.
void write_scenario(std::ostream& os, const ScenarioConfig& cfg);

}  // namespace ztorch
