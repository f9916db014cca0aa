#pragma once

#include <Eigen/Dense>

#include "faultsim/allocator/splitter.hpp"
#include "faultsim/errors.hpp"
#include "faultsim/plant/operating_point.hpp"

namespace faultsim::ctrl {

// rho = (z - z0) + eta * integral of (z - z0).
inline double filtered_error(double z, double z0, double z_tilde_I, double eta) {
  return (z - z0) + eta * z_tilde_I;
}

// C^T l0 for block rows c_i^T = [1, 0]: l0_i on each position state, 0 on
// each rate state.
inline Eigen::VectorXd c_transpose_l0(const Eigen::VectorXd& l0) {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(2 * l0.size());
  for (Eigen::Index i = 0; i < l0.size(); ++i) v[2 * i] = l0[i];
  return v;
}

// Auxiliary high-level law: x_tilde_des = -k1 C^T l0 rho.
inline Eigen::VectorXd high_level_command(double rho, double k1, const Eigen::VectorXd& l0) {
  return (-k1 * rho) * c_transpose_l0(l0);
}

// Low-level tracking error: e = (x - x0) + k1 C^T l0 rho. Rate components
// are the raw rate errors.
inline Eigen::VectorXd low_level_error(const Eigen::VectorXd& x, const Eigen::VectorXd& x0,
                                       double rho, double k1, const Eigen::VectorXd& l0) {
  return (x - x0) + (k1 * rho) * c_transpose_l0(l0);
}

struct ControlInput {
  Eigen::VectorXd u;  // per-actuator commanded angle
  double s = 0.0;     // shared scalar k2^T e
};

// u_i = y0_i - beta_i (k2^T e): matching-condition feedforward plus the
// state feedback restricted to the splitter direction.
inline ControlInput control_input(const Eigen::VectorXd& e, const Eigen::VectorXd& beta,
                                  const plant::OperatingPoint& op, const Eigen::VectorXd& k2) {
  if (!alloc::simplex_check(beta)) throw ContractError("control_input: allocation off the simplex");
  if (e.size() != k2.size() || beta.size() != op.u0_offset.size())
    throw ContractError("control_input: dimension mismatch");
  ControlInput out;
  out.s = k2.dot(e);
  out.u = op.u0_offset - out.s * beta;
  return out;
}

}  // namespace faultsim::ctrl
