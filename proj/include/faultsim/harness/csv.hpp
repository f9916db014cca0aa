#pragma once

#include <string>

#include "faultsim/harness/trajectory.hpp"

namespace faultsim::harness {

// CSV layout: a `# schema: <tag>` comment line, the column header, then one
// row per sample. Values use the shortest representation that round-trips
// the double exactly, so import == export bit for bit.
std::string csv_to_string(const Trajectory& traj);
void emit_csv(const Trajectory& traj, const std::string& path);
Trajectory import_csv_string(const std::string& text);
Trajectory import_csv(const std::string& path);

}  // namespace faultsim::harness
