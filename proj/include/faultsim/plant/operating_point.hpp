#pragma once

#include <Eigen/Dense>
#include <cmath>

#include "faultsim/errors.hpp"
#include "faultsim/plant/rotor.hpp"

namespace faultsim::plant {

// Equilibrium of the coupled loop: rotor_deriv(z0, w0, phi(y0)) = 0, actuator
// rates zero, and the matching-condition feedforward u0_offset = -varphi(x0).
struct OperatingPoint {
  double z0 = 0.0;
  double w0 = 0.0;
  Eigen::VectorXd y0;         // per-actuator operating pitch
  Eigen::VectorXd x0;         // [y0_1, 0, y0_2, 0, ...] (2n)
  Eigen::VectorXd u0_offset;  // per-actuator feedforward = y0_i

  int n() const { return static_cast<int>(y0.size()); }

  // Relative residual of the equilibrium identity.
  double residual(const RotorParams& p) const {
    const double f = f_aero(z0, w0, p);
    return std::abs(rotor_deriv(z0, w0, phi(y0), p)) / std::max(1.0, std::abs(f));
  }

  void validate(const RotorParams& p) const {
    if (residual(p) > 1e-8)
      throw ConfigError("OperatingPoint: equilibrium residual exceeds 1e-8 relative");
    for (int i = 0; i < n(); ++i)
      if (x0[2 * i + 1] != 0.0) throw ConfigError("OperatingPoint: rates must be exactly 0");
  }
};

// Solve phi0 = f/g and split it symmetrically: y0_i = sqrt(phi0 / n).
// A x0 has -wn2 y0_i on each rate row, so varphi_i(x0_i) = -y0_i and the
// control feedforward -varphi_i(x0_i) equals y0_i.
inline OperatingPoint solve_operating_point(const RotorParams& p, double z0, double w0, int n) {
  if (n < 1) throw ConfigError("solve_operating_point: need n >= 1");
  const double f = f_aero(z0, w0, p);
  const double g = g_aero(z0, w0, p);
  if (!(f > 0.0) || !(g > 0.0))
    throw ConfigError("solve_operating_point: no feasible operating point (f or g <= 0)");

  const double phi0 = f / g;
  const double y0i = std::sqrt(phi0 / static_cast<double>(n));

  OperatingPoint op;
  op.z0 = z0;
  op.w0 = w0;
  op.y0 = Eigen::VectorXd::Constant(n, y0i);
  op.x0 = Eigen::VectorXd::Zero(2 * n);
  for (int i = 0; i < n; ++i) op.x0[2 * i] = y0i;
  op.u0_offset = op.y0;
  op.validate(p);
  return op;
}

}  // namespace faultsim::plant
