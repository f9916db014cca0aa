#pragma once

#include <Eigen/Dense>
#include <cmath>

#include "faultsim/errors.hpp"

namespace faultsim::ctrl {

// High-level (rotor) loop gains and uncertainty bounds.
struct HighLevelGains {
  double k1 = 61.0;
  double eta = 1.0;                                  // 1/s integral blend
  Eigen::VectorXd l0 = Eigen::VectorXd::Constant(3, -1.0);  // conic direction
  double gamma = 0.3;                                // target L2 gain
  double alpha = 3.0;                                // conic constant
  double h_bar_z = 2.54;
  double l_bar_w = 7.8;

  void validate() const {
    if (!(k1 > 0 && eta > 0 && gamma > 0 && alpha > 0 && h_bar_z > 0 && l_bar_w > 0))
      throw ConfigError("HighLevelGains: all scalars must be > 0");
    if (l0.size() < 1) throw ConfigError("HighLevelGains: l0 must be non-empty");
  }
};

// Low-level (actuator) loop gains. lambda1, lambda2 only enter the reported
// disturbance-gain bound lambda1/lambda2 and must satisfy
// 1/lambda1 + lambda2 = alpha_l.
struct LowLevelGains {
  Eigen::VectorXd k2 = (Eigen::VectorXd(6) << 50, 1, 50, 1, 50, 1).finished();
  double alpha_l = 1.0;
  double lambda1 = 2.0;  // balanced split: 1/lambda1 = lambda2 = alpha_l / 2
  double lambda2 = 0.5;

  void validate() const {
    if (!(alpha_l > 0)) throw ConfigError("LowLevelGains: alpha_l must be > 0");
    if (!(lambda1 > 0 && lambda2 > 0))
      throw ConfigError("LowLevelGains: lambda1, lambda2 must be > 0");
    if (std::abs(1.0 / lambda1 + lambda2 - alpha_l) > 1e-12)
      throw ConfigError("LowLevelGains: 1/lambda1 + lambda2 must equal alpha_l");
  }

  // Default lambdas for a given alpha_l (the symmetric lambda1 = lambda2
  // solution is complex for alpha_l < 2, so split the identity evenly).
  void set_balanced_lambdas() {
    lambda1 = 2.0 / alpha_l;
    lambda2 = alpha_l / 2.0;
  }

  double gain_bound() const { return lambda1 / lambda2; }
};

}  // namespace faultsim::ctrl
