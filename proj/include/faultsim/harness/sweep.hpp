#pragma once

#include <optional>
#include <string>
#include <vector>

#include "faultsim/harness/config.hpp"
#include "faultsim/metrics/metrics.hpp"

namespace faultsim::harness {

struct SweepEntry {
  std::string name;
  ScenarioConfig cfg;
};

struct SweepRow {
  std::string name;
  bool ok = false;
  std::string error;
  std::optional<double> l2_gain;
  metrics::RunMetrics run;
};

struct SweepReport {
  std::vector<SweepRow> rows;  // sorted by scenario name
  std::string to_csv() const;
};

// Run scenarios independently (parallel workers; results are keyed and
// sorted by name, so the table is invariant to execution order). Duplicate
// names are rejected up front; per-scenario failures land in their row and
// do not stop the batch. When out_dir is non-empty, each scenario's
// configured outputs are written under out_dir/<name>/.
SweepReport run_sweep(const std::vector<SweepEntry>& entries, const std::string& out_dir = "",
                      unsigned workers = 0);

}  // namespace faultsim::harness
