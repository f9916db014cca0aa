#pragma once

#include <Eigen/Dense>
#include <cmath>

#include "faultsim/errors.hpp"

namespace faultsim::plant {

// Second-order pitch actuator, parameterized by (wn^2, 2 zeta wn).
struct ActuatorParams {
  double wn2 = 123.4321;         // (rad/s)^2
  double two_zeta_wn = 13.332;   // rad/s

  void validate() const {
    if (!(wn2 > 0.0)) throw ConfigError("ActuatorParams: wn2 must be > 0");
    if (!(two_zeta_wn > 0.0)) throw ConfigError("ActuatorParams: two_zeta_wn must be > 0");
  }
};

// x = [pitch angle; pitch rate], dx = [x2; -wn2 x1 - 2 zeta wn x2 + wn2 u].
inline Eigen::Vector2d actuator_deriv(const Eigen::Vector2d& x, double u,
                                      const ActuatorParams& p) {
  return {x[1], -p.wn2 * x[0] - p.two_zeta_wn * x[1] + p.wn2 * u};
}

// Largest real part of the companion-matrix eigenvalues of
// lambda^2 + two_zeta_wn lambda + wn2 = 0 (closed form).
inline double companion_max_real(const ActuatorParams& p) {
  const double disc = p.two_zeta_wn * p.two_zeta_wn - 4.0 * p.wn2;
  if (disc < 0.0) return -p.two_zeta_wn / 2.0;
  return (-p.two_zeta_wn + std::sqrt(disc)) / 2.0;
}

}  // namespace faultsim::plant
