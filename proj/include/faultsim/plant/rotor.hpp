#pragma once

#include <Eigen/Dense>
#include <cmath>

#include "faultsim/errors.hpp"

namespace faultsim::plant {

// Lumped-parameter rotor model constants (5MW class, experimentally fitted).
struct RotorParams {
  double m1 = 5.4184;
  double m2 = 0.0682;
  double m3 = 0.029;
  double c = 9.6e5;
  double J = 43784700.0;   // kg m^2, total drive-train inertia
  double P0 = 5296610.0;   // W, rated mechanical power
  // +1/-1; -1 means the collective pitch term decelerates the rotor. Kept as
  // an explicit switch so the sign convention is auditable in config dumps.
  double coupling_sign = -1.0;

  void validate() const {
    if (!(m1 > 0 && m2 > 0 && m3 > 0 && c > 0 && J > 0 && P0 > 0))
      throw ConfigError("RotorParams: all constants must be strictly positive");
    if (coupling_sign != 1.0 && coupling_sign != -1.0)
      throw ConfigError("RotorParams: coupling_sign must be +1 or -1");
  }
};

// Aerodynamic drive term: c w^3/(2 J z) (w/z - m1) exp(-m2 w/z) - P0/(J z).
inline double f_aero(double z, double w, const RotorParams& p) {
  if (!(z > 0.0)) throw SingularityError("f_aero: rotor speed must be > 0");
  const double r = w / z;
  return p.c * w * w * w / (2.0 * p.J * z) * (r - p.m1) * std::exp(-p.m2 * r) - p.P0 / (p.J * z);
}

// Pitch coupling gain: c w^3/(6 J z) m3 exp(-m2 w/z). Positive for w > 0.
inline double g_aero(double z, double w, const RotorParams& p) {
  if (!(z > 0.0)) throw SingularityError("g_aero: rotor speed must be > 0");
  return p.c * w * w * w / (6.0 * p.J * z) * p.m3 * std::exp(-p.m2 * w / z);
}

// phi(y) = ||y||_2^2, the collective coupling function.
template <typename Derived>
typename Derived::Scalar phi(const Eigen::MatrixBase<Derived>& y) {
  return y.squaredNorm();
}

inline double rotor_deriv(double z, double w, double phi_val, const RotorParams& p) {
  return f_aero(z, w, p) + p.coupling_sign * g_aero(z, w, p) * phi_val;
}

}  // namespace faultsim::plant
