#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "faultsim/errors.hpp"

namespace faultsim::est {

// Nominal parameters and the deviation normalizers d_w, d_z. With the
// default fault family (wn2 = 11.6964, 2 zeta wn = 3.078) the indicator
// saturates at exactly 1.
struct DeviationConfig {
  double wn2_0 = 123.4321;
  double tzw_0 = 13.332;
  double d_w = 111.7357;
  double d_z = 10.254;

  void validate() const {
    if (!(wn2_0 > 0 && tzw_0 > 0 && d_w > 0 && d_z > 0))
      throw ConfigError("DeviationConfig: all entries must be > 0");
  }
};

// Theta_check = 1/2 (|wn2_0 - wn2_hat|/d_w + |tzw_0 - tzw_hat|/d_z),
// clamped into [0, 1]: 0 = healthy, 1 = full fault.
inline double deviation_indicator(const Eigen::Vector2d& theta_hat, const DeviationConfig& cfg) {
  const double v = 0.5 * (std::abs(cfg.wn2_0 - theta_hat[0]) / cfg.d_w +
                          std::abs(cfg.tzw_0 - theta_hat[1]) / cfg.d_z);
  return std::clamp(v, 0.0, 1.0);
}

}  // namespace faultsim::est
