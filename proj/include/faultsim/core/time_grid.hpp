#pragma once

#include <cmath>
#include <cstdint>

#include "faultsim/errors.hpp"

namespace faultsim::core {

// Uniform time grid; (tf - t0) must be an integer multiple of dt.
struct TimeGrid {
  double t0 = 0.0;
  double tf = 0.0;
  double dt = 0.0;

  TimeGrid() = default;
  TimeGrid(double t0_, double tf_, double dt_) : t0(t0_), tf(tf_), dt(dt_) { validate(); }

  void validate() const {
    if (!(dt > 0.0)) throw ConfigError("TimeGrid: dt must be > 0");
    if (!(tf > t0)) throw ConfigError("TimeGrid: tf must be > t0");
    const double steps = (tf - t0) / dt;
    if (std::abs(steps - std::round(steps)) > 1e-9)
      throw ConfigError("TimeGrid: (tf - t0) is not an integer multiple of dt");
  }

  std::int64_t step_count() const { return static_cast<std::int64_t>(std::llround((tf - t0) / dt)); }

  // k-th grid point, k in [0, step_count()].
  double time_at(std::int64_t k) const { return t0 + static_cast<double>(k) * dt; }
};

}  // namespace faultsim::core
