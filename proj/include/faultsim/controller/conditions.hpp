#pragma once

#include <Eigen/Dense>
#include <vector>

#include "faultsim/allocator/splitter.hpp"
#include "faultsim/controller/gains.hpp"
#include "faultsim/controller/jacobi.hpp"
#include "faultsim/errors.hpp"
#include "faultsim/plant/actuator.hpp"

namespace faultsim::ctrl {

struct K1Check {
  double threshold = 0.0;
  bool satisfied = false;
};

// High-level sufficient condition:
//   k1 >= (h_bar_z + 2 eta)^2 / (4 alpha eta) + l_bar_w^2 / (4 alpha gamma^2)
//        + 1 / alpha.
inline K1Check check_k1(const HighLevelGains& g) {
  if (!(g.alpha > 0 && g.eta > 0 && g.gamma > 0))
    throw ConfigError("check_k1: alpha, eta, gamma must be > 0");
  K1Check r;
  const double a = g.h_bar_z + 2.0 * g.eta;
  r.threshold = a * a / (4.0 * g.alpha * g.eta) +
                g.l_bar_w * g.l_bar_w / (4.0 * g.alpha * g.gamma * g.gamma) + 1.0 / g.alpha;
  r.satisfied = g.k1 >= r.threshold;
  return r;
}

// Block-diagonal input matrix of the expanded model: b_i = [0; wn2_i].
inline Eigen::MatrixXd input_matrix(const std::vector<plant::ActuatorParams>& acts) {
  const auto n = static_cast<Eigen::Index>(acts.size());
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(2 * n, n);
  for (Eigen::Index i = 0; i < n; ++i) B(2 * i + 1, i) = acts[static_cast<size_t>(i)].wn2;
  return B;
}

struct K2Check {
  double a_r = 0.0;      // max Re(eig A) over the companion blocks
  double max_eig = 0.0;  // largest eigenvalue of the condition matrix
  bool satisfied = false;
};

// Low-level sufficient condition:
//   (2 a_r + alpha_l) I - B beta k2^T - k2 beta^T B^T <= 0.
// a_r comes from the closed-form companion roots; the matrix eigenvalues
// from cyclic Jacobi sweeps.
inline K2Check check_k2(const std::vector<plant::ActuatorParams>& acts,
                        const Eigen::VectorXd& beta, const Eigen::VectorXd& k2, double alpha_l) {
  if (!(alpha_l > 0)) throw ConfigError("check_k2: alpha_l must be > 0");
  if (!alloc::simplex_check(beta)) throw ContractError("check_k2: beta must be on the simplex");
  const auto n = static_cast<Eigen::Index>(acts.size());
  if (beta.size() != n || k2.size() != 2 * n) throw ContractError("check_k2: dimension mismatch");

  K2Check r;
  r.a_r = plant::companion_max_real(acts[0]);
  for (const auto& a : acts) r.a_r = std::max(r.a_r, plant::companion_max_real(a));

  const Eigen::VectorXd v = input_matrix(acts) * beta;
  Eigen::MatrixXd M = (2.0 * r.a_r + alpha_l) * Eigen::MatrixXd::Identity(2 * n, 2 * n);
  M -= v * k2.transpose();
  M -= k2 * v.transpose();
  r.max_eig = jacobi_max_eigenvalue<double>(M);
  r.satisfied = r.max_eig <= 0.0;
  return r;
}

// Gain recipe from the uncertainty remark: k2 = eps B0 beta with
// 0 < eps <= 2; sufficient whenever 2 a_r + alpha_l + sigma_b <= 0.
inline Eigen::VectorXd remark_k2(const std::vector<plant::ActuatorParams>& nominal,
                                 const Eigen::VectorXd& beta, double epsilon) {
  if (!(epsilon > 0.0) || epsilon > 2.0)
    throw ConfigError("remark_k2: epsilon must be in (0, 2]");
  if (!alloc::simplex_check(beta)) throw ContractError("remark_k2: beta must be on the simplex");
  return epsilon * (input_matrix(nominal) * beta);
}

}  // namespace faultsim::ctrl
