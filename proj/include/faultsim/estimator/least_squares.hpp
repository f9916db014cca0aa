#pragma once

#include <Eigen/Dense>
#include <cmath>

#include "faultsim/errors.hpp"

namespace faultsim::est {

// Bounded-gain forgetting configuration; every field is config-exposed.
struct EstimatorConfig {
  double af = 20.0;        // rad/s regression filter cutoff
  double mu0 = 50.0;       // 1/s maximum forgetting rate
  double k0 = 50.0;        // bound on ||P||
  double p0_scale = 10.0;  // P_i(0) = p0_scale * I

  void validate() const {
    if (!(af > 0.0)) throw ConfigError("EstimatorConfig: af must be > 0");
    if (!(mu0 > 0.0)) throw ConfigError("EstimatorConfig: mu0 must be > 0");
    if (!(k0 > 0.0)) throw ConfigError("EstimatorConfig: k0 must be > 0");
    if (!(p0_scale > 0.0)) throw ConfigError("EstimatorConfig: p0_scale must be > 0");
  }
};

// Spectral norm of a symmetric 2x2 (largest eigenvalue magnitude) in closed
// form.
inline double spectral_norm_sym2(const Eigen::Matrix2d& P) {
  const double half_tr = 0.5 * (P(0, 0) + P(1, 1));
  const double rad = std::sqrt(0.25 * (P(0, 0) - P(1, 1)) * (P(0, 0) - P(1, 1)) + P(0, 1) * P(0, 1));
  return std::max(std::abs(half_tr + rad), std::abs(half_tr - rad));
}

inline double min_eig_sym2(const Eigen::Matrix2d& P) {
  const double half_tr = 0.5 * (P(0, 0) + P(1, 1));
  const double rad = std::sqrt(0.25 * (P(0, 0) - P(1, 1)) * (P(0, 0) - P(1, 1)) + P(0, 1) * P(0, 1));
  return half_tr - rad;
}

// mu(t) = mu0 (1 - ||P|| / k0). Negative when ||P|| > k0, which actively
// shrinks P back under the bound.
inline double forgetting_factor(const Eigen::Matrix2d& P, double mu0, double k0) {
  if (!(k0 > 0.0)) throw ConfigError("forgetting_factor: k0 must be > 0");
  return mu0 * (1.0 - spectral_norm_sym2(P) / k0);
}

struct EstimatorDeriv {
  Eigen::Vector2d dtheta;
  Eigen::Matrix2d dP;
};

// Least squares with exponential bounded-gain forgetting, in the measurable
// innovation form:
//   dtheta = P Y^T (x_check - Y theta_hat)
//   dP     = mu P - P Y^T Y P   (symmetrized)
inline EstimatorDeriv estimator_deriv(const Eigen::Vector2d& theta_hat, const Eigen::Matrix2d& P,
                                      const Eigen::RowVector2d& Y, double x_check, double mu0,
                                      double k0) {
  EstimatorDeriv d;
  const double innovation = x_check - Y * theta_hat;
  d.dtheta = P * Y.transpose() * innovation;
  const double mu = forgetting_factor(P, mu0, k0);
  Eigen::Matrix2d dP = mu * P - P * Y.transpose() * Y * P;
  d.dP = 0.5 * (dP + dP.transpose());
  return d;
}

// Positive-definiteness guard: if the smallest eigenvalue of P sinks below
// the floor, shift the diagonal back up. Returns true when a projection
// happened (callers log it as a warning event).
inline bool pd_project(Eigen::Matrix2d& P, double floor = 1e-8) {
  P = 0.5 * (P + P.transpose().eval());
  const double lmin = min_eig_sym2(P);
  if (lmin >= floor) return false;
  P += (floor - lmin) * Eigen::Matrix2d::Identity();
  return true;
}

}  // namespace faultsim::est
