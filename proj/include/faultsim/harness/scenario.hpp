#pragma once

#include <optional>
#include <string>
#include <vector>

#include "faultsim/controller/conditions.hpp"
#include "faultsim/harness/config.hpp"
#include "faultsim/harness/report.hpp"
#include "faultsim/harness/trajectory.hpp"
#include "faultsim/metrics/metrics.hpp"
#include "faultsim/plant/operating_point.hpp"

namespace faultsim::harness {

// Both gain sufficient conditions evaluated for a config (k2 at nominal
// parameters and uniform allocation). Violations are warnings unless the
// config is strict.
struct GainCertificate {
  ctrl::K1Check k1;
  ctrl::K2Check k2;
  std::vector<std::string> warnings;
};

GainCertificate certify_gains(const ScenarioConfig& cfg);

struct ScenarioResult {
  Trajectory trajectory;
  metrics::RunMetrics run;
  std::optional<double> l2_gain;  // unset when the disturbance has no energy
  GainCertificate gains;
  plant::OperatingPoint op;
  long pd_projections = 0;
  double p_norm_max = 0.0;  // worst ||P_i|| seen (bounded-gain forgetting cap)
  std::string rng_algorithm;
};

// Assemble the full closed loop (plant + wind + estimator + splitter +
// two-level control) into one flat state vector and integrate it over the
// configured grid. Deterministic per (config, seed).
ScenarioResult run_scenario(const ScenarioConfig& cfg);

// Metrics + provenance in flat key = value form.
Report build_report(const ScenarioConfig& cfg, const ScenarioResult& result);

// Write csv/svg/report files per cfg.outputs, relative to out_dir when the
// configured paths are relative. Returns the written paths.
std::vector<std::string> write_outputs(const ScenarioConfig& cfg, const ScenarioResult& result,
                                       const std::string& out_dir);

}  // namespace faultsim::harness
