#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "faultsim/errors.hpp"

namespace faultsim::harness {

inline constexpr const char* kTrajectorySchema = "faultsim.trajectory.v1";

// Uniform-time channel table. Column order is part of the CSV contract:
//   t, w, z, rho, zI, per-actuator (x1_i, x2_i, u_i, beta_i, wn2_hat_i,
//   tzw_hat_i, theta_check_i), phi.
class Trajectory {
 public:
  Trajectory() = default;
  Trajectory(std::vector<std::string> columns, Eigen::Index rows)
      : columns_(std::move(columns)),
        data_(Eigen::MatrixXd::Zero(rows, static_cast<Eigen::Index>(columns_.size()))) {}

  static std::vector<std::string> standard_columns(int n_actuators) {
    std::vector<std::string> cols = {"t", "w", "z", "rho", "zI"};
    for (int i = 1; i <= n_actuators; ++i) {
      const std::string s = std::to_string(i);
      for (const char* base : {"x1_", "x2_", "u_", "beta_", "wn2_hat_", "tzw_hat_", "theta_check_"})
        cols.push_back(base + s);
    }
    cols.emplace_back("phi");
    return cols;
  }

  Eigen::Index rows() const { return data_.rows(); }
  Eigen::Index cols() const { return data_.cols(); }
  const std::vector<std::string>& columns() const { return columns_; }

  Eigen::Index column_index(const std::string& name) const {
    for (size_t i = 0; i < columns_.size(); ++i)
      if (columns_[i] == name) return static_cast<Eigen::Index>(i);
    throw ConfigError("Trajectory: no column named '" + name + "'");
  }

  bool has_column(const std::string& name) const {
    for (const auto& c : columns_)
      if (c == name) return true;
    return false;
  }

  Eigen::VectorXd column(const std::string& name) const { return data_.col(column_index(name)); }

  double& cell(Eigen::Index row, Eigen::Index col) { return data_(row, col); }
  double cell(Eigen::Index row, Eigen::Index col) const { return data_(row, col); }

  Eigen::MatrixXd& data() { return data_; }
  const Eigen::MatrixXd& data() const { return data_; }

 private:
  std::vector<std::string> columns_;
  Eigen::MatrixXd data_;
};

}  // namespace faultsim::harness
