#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "faultsim/errors.hpp"
#include "faultsim/plant/actuator.hpp"

namespace faultsim::plant {

enum class FaultProfile { Abrupt, LinearRamp };

// One fault window [t_on, t_off) on a single actuator. Right-open: the
// parameters revert to nominal exactly at t_off.
struct FaultEvent {
  int actuator = 0;    // 0-based index
  double t_on = 0.0;
  double t_off = 0.0;
  ActuatorParams target{};
  FaultProfile profile = FaultProfile::Abrupt;
  double ramp_time = 0.0;  // blend-in duration for LinearRamp
};

struct FaultSchedule {
  std::vector<FaultEvent> events;

  void validate(int n_actuators) const {
    for (const auto& e : events) {
      if (e.actuator < 0 || e.actuator >= n_actuators)
        throw ConfigError("FaultSchedule: actuator index out of range");
      if (!(e.t_on < e.t_off)) throw ConfigError("FaultSchedule: t_on must be < t_off");
      if (e.profile == FaultProfile::LinearRamp && !(e.ramp_time > 0.0))
        throw ConfigError("FaultSchedule: ramp profile needs ramp_time > 0");
      e.target.validate();
    }
    for (size_t a = 0; a < events.size(); ++a)
      for (size_t b = a + 1; b < events.size(); ++b) {
        const auto& ea = events[a];
        const auto& eb = events[b];
        if (ea.actuator == eb.actuator && ea.t_on < eb.t_off && eb.t_on < ea.t_off)
          throw ConfigError("FaultSchedule: overlapping events on actuator " +
                            std::to_string(ea.actuator + 1));
      }
  }

  // True if some event on actuator i covers time t.
  bool active(double t, int i) const {
    for (const auto& e : events)
      if (e.actuator == i && t >= e.t_on && t < e.t_off) return true;
    return false;
  }
};

// Effective parameters of actuator i at time t: nominal outside events,
// target (or linear blend during the ramp-in) inside [t_on, t_off).
inline ActuatorParams fault_params_at(double t, const FaultSchedule& schedule,
                                      const ActuatorParams& nominal, int i) {
  for (const auto& e : schedule.events) {
    if (e.actuator != i || t < e.t_on || t >= e.t_off) continue;
    if (e.profile == FaultProfile::Abrupt) return e.target;
    const double s = std::clamp((t - e.t_on) / e.ramp_time, 0.0, 1.0);
    return ActuatorParams{(1.0 - s) * nominal.wn2 + s * e.target.wn2,
                          (1.0 - s) * nominal.two_zeta_wn + s * e.target.two_zeta_wn};
  }
  return nominal;
}

}  // namespace faultsim::plant
