#pragma once

#include <string>
#include <vector>

#include "faultsim/allocator/splitter.hpp"
#include "faultsim/controller/gains.hpp"
#include "faultsim/core/time_grid.hpp"
#include "faultsim/errors.hpp"
#include "faultsim/estimator/deviation.hpp"
#include "faultsim/estimator/least_squares.hpp"
#include "faultsim/plant/faults.hpp"
#include "faultsim/plant/rotor.hpp"
#include "faultsim/wind/wind.hpp"

namespace faultsim::harness {

enum class AllocatorMode { Splitter, UniformAblation, KnownFaultSet };

struct AllocatorConfig {
  AllocatorMode mode = AllocatorMode::Splitter;
  double tau = 0.02;        // fault-classification threshold on Theta_check
  bool hysteresis = false;  // latched classification band, off by default
  double tau_on = 0.02;
  double tau_off = 0.01;
  double beta_floor = 0.02;  // identifiability floor; 0 = plain formula
};

struct MetricsConfig {
  double e_tol = 0.05;           // ||e|| gate for the dissipation certificate
  double transient_guard = 5.0;  // s added after each fault window
  double z_recovery_tol = 1e-3;  // rad/s band for z recovery time
  double phi_recovery_tol = 5.0; // band on |phi - phi_des| for phi recovery
  double recovery_hold = 5.0;    // s the signal must stay inside the band

  void validate() const {
    if (!(e_tol > 0 && transient_guard >= 0 && z_recovery_tol > 0 && phi_recovery_tol > 0 &&
          recovery_hold > 0))
      throw ConfigError("MetricsConfig: invalid entry");
  }
};

struct OutputConfig {
  std::string csv;     // trajectory CSV path ("" = skip)
  std::string report;  // metrics report path ("" = skip)
  bool svg = false;
  std::vector<std::string> svg_channels = {"z", "beta", "theta_check", "x1"};
};

struct ScenarioConfig {
  std::string name = "default";
  bool strict = false;

  plant::RotorParams rotor;
  double z0 = 1.267;  // rad/s operating rotor speed

  int n_actuators = 3;
  plant::ActuatorParams nominal{};
  plant::ActuatorParams fault_target{11.6964, 3.078};
  plant::FaultSchedule faults;  // defaults to the abrupt [75, 125) event on actuator 3

  wind::WindConfig wind;
  std::string wind_trace_file;

  ctrl::HighLevelGains gains_hl;
  ctrl::LowLevelGains gains_ll;

  est::EstimatorConfig estimator;
  est::DeviationConfig deviation;

  AllocatorConfig allocator;
  core::TimeGrid grid{0.0, 200.0, 0.002};
  MetricsConfig metrics;
  OutputConfig outputs;

  void validate() const;
};

// The all-defaults configuration: the reference 5MW scenario with the
// abrupt actuator-3 fault over [75, 125) s.
ScenarioConfig default_config();

// Sectioned key = value text -> validated config. Unknown sections/keys and
// type mismatches are rejected with the line number and key path. When the
// parsed config sets strict = true, the k1 sufficient condition is enforced
// here as well (GainCheckError).
ScenarioConfig parse_config(const std::string& text);
ScenarioConfig parse_config_file(const std::string& path);

// Fully resolved config in the same INI format (provenance dump).
std::string dump_config(const ScenarioConfig& cfg);

}  // namespace faultsim::harness
