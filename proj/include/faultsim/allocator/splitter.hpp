#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "faultsim/errors.hpp"

namespace faultsim::alloc {

// Simplex-constrained control distribution.
struct Allocation {
  Eigen::VectorXd beta;
  int q = 0;          // number of agents classified faulty
  double tau = 0.02;  // classification threshold used
};

template <typename Derived>
bool simplex_check(const Eigen::MatrixBase<Derived>& beta, double tol = 1e-12) {
  if (beta.size() == 0) return false;
  for (Eigen::Index i = 0; i < beta.size(); ++i)
    if (!(beta[i] >= 0.0 && beta[i] <= 1.0)) return false;
  return std::abs(beta.sum() - 1.0) <= tol;
}

// Core splitter with an externally supplied faulty set. Faulty agents get
// (1/n)(1 - Theta_check_i); healthy agents share the held-back average:
// (1/n)(1 + sum_faulty Theta_check / (n - q)). Sums to 1 by construction.
// All-faulty falls back to uniform (the formula divides by n - q).
inline Allocation split_with_mask(const Eigen::VectorXd& theta_check,
                                  const std::vector<bool>& faulty, double tau) {
  const Eigen::Index n = theta_check.size();
  if (n < 1) throw ContractError("split: need n >= 1");
  if (static_cast<Eigen::Index>(faulty.size()) != n)
    throw ContractError("split: mask size mismatch");
  for (Eigen::Index i = 0; i < n; ++i)
    if (!(theta_check[i] >= 0.0 && theta_check[i] <= 1.0))
      throw ContractError("split: deviation indicator outside [0, 1] (upstream clamp failed)");

  Allocation a;
  a.tau = tau;
  double sum_faulty = 0.0;
  for (Eigen::Index i = 0; i < n; ++i)
    if (faulty[static_cast<size_t>(i)]) {
      ++a.q;
      sum_faulty += theta_check[i];
    }

  const double inv_n = 1.0 / static_cast<double>(n);
  if (a.q == 0 || a.q == static_cast<int>(n)) {
    a.beta = Eigen::VectorXd::Constant(n, inv_n);
    return a;
  }
  const double healthy_boost = sum_faulty / static_cast<double>(n - a.q);
  a.beta.resize(n);
  for (Eigen::Index i = 0; i < n; ++i)
    a.beta[i] = faulty[static_cast<size_t>(i)] ? inv_n * (1.0 - theta_check[i])
                                               : inv_n * (1.0 + healthy_boost);
  return a;
}

// Plain thresholded splitter: agent i is faulty iff Theta_check_i > tau.
inline Allocation split(const Eigen::VectorXd& theta_check, double tau) {
  std::vector<bool> faulty(static_cast<size_t>(theta_check.size()));
  for (Eigen::Index i = 0; i < theta_check.size(); ++i)
    faulty[static_cast<size_t>(i)] = theta_check[i] > tau;
  return split_with_mask(theta_check, faulty, tau);
}

// Excitation floor: lift agents below `floor` up to it and take the added
// mass pro-rata from the agents above it, so the sum stays exactly 1.
// A fully written-off agent (beta_i = 0 at Theta_check_i = 1) would receive
// a constant input forever and its regressor would vanish, leaving the
// estimator blind to recovery; the floor keeps every agent identifiable.
// floor = 0 disables.
inline void apply_floor(Eigen::VectorXd& beta, double floor) {
  if (floor <= 0.0) return;
  const auto n = static_cast<double>(beta.size());
  if (!(floor * n < 1.0)) throw ConfigError("apply_floor: need n * floor < 1");
  double deficit = 0.0;
  for (Eigen::Index i = 0; i < beta.size(); ++i)
    if (beta[i] < floor) {
      deficit += floor - beta[i];
      beta[i] = floor;
    }
  if (deficit == 0.0) return;
  double excess = 0.0;
  for (Eigen::Index i = 0; i < beta.size(); ++i)
    if (beta[i] > floor) excess += beta[i] - floor;
  for (Eigen::Index i = 0; i < beta.size(); ++i)
    if (beta[i] > floor) beta[i] -= deficit * (beta[i] - floor) / excess;
}

// Optional hysteresis classifier (disabled by default scenario config):
// an agent turns faulty above tau_on and recovers only below tau_off,
// suppressing chattering near a single threshold. Latched state updates at
// accepted integration steps only.
class HysteresisClassifier {
 public:
  HysteresisClassifier(Eigen::Index n, double tau_on, double tau_off)
      : latched_(static_cast<size_t>(n), false), tau_on_(tau_on), tau_off_(tau_off) {
    if (!(tau_off <= tau_on)) throw ConfigError("hysteresis: need tau_off <= tau_on");
  }

  const std::vector<bool>& update(const Eigen::VectorXd& theta_check) {
    for (Eigen::Index i = 0; i < theta_check.size(); ++i) {
      auto k = static_cast<size_t>(i);
      if (latched_[k]) {
        if (theta_check[i] < tau_off_) latched_[k] = false;
      } else {
        if (theta_check[i] > tau_on_) latched_[k] = true;
      }
    }
    return latched_;
  }

  const std::vector<bool>& state() const { return latched_; }

 private:
  std::vector<bool> latched_;
  double tau_on_;
  double tau_off_;
};

}  // namespace faultsim::alloc
