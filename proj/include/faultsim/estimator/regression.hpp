#pragma once

#include <Eigen/Dense>

#include "faultsim/errors.hpp"

namespace faultsim::est {

// First-order lag H(s) = af/(s + af) in state form: d(xf)/dt = af (x - xf).
template <typename DerivedA, typename DerivedB>
auto filter_deriv(const Eigen::MatrixBase<DerivedA>& raw, const Eigen::MatrixBase<DerivedB>& filtered,
                  double af) {
  if (!(af > 0.0)) throw ConfigError("filter_deriv: af must be > 0");
  return (af * (raw - filtered)).eval();
}

// Scalar regression row for one actuator:
//   x_check = af (x2 - x2f)          (filtered pitch acceleration)
//   Y       = [uf - x1f, -x2f]
// so that x_check = Y theta with theta = [wn2; 2 zeta wn] once the filter
// transient (rate af) has decayed.
struct Regressor {
  Eigen::RowVector2d Y;
  double x_check = 0.0;
};

inline Regressor regressor(const Eigen::Vector2d& xf, double uf, double x2_raw, double af) {
  Regressor r;
  r.Y << uf - xf[0], -xf[1];
  r.x_check = af * (x2_raw - xf[1]);
  return r;
}

}  // namespace faultsim::est
