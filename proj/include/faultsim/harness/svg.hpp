#pragma once

#include <optional>
#include <string>
#include <vector>

#include "faultsim/harness/trajectory.hpp"

namespace faultsim::harness {

// Native minimal SVG line charts: one chart per channel group, stacked
// vertically in a single document. A group name selects columns by exact
// match or by prefix "<name>_" (so "beta" draws beta_1..beta_n).
// t_range restricts the plotted time window when set.
std::string svg_to_string(const Trajectory& traj, const std::vector<std::string>& groups,
                          std::optional<std::pair<double, double>> t_range = std::nullopt);
void emit_svg(const Trajectory& traj, const std::vector<std::string>& groups,
              const std::string& path,
              std::optional<std::pair<double, double>> t_range = std::nullopt);

}  // namespace faultsim::harness
