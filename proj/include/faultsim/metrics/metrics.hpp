#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "faultsim/errors.hpp"

namespace faultsim::metrics {

// Trapezoidal quadrature of uniformly sampled values.
inline double trapezoid(const Eigen::VectorXd& v, double dt) {
  if (v.size() < 2) return 0.0;
  return dt * (v.sum() - 0.5 * (v[0] + v[v.size() - 1]));
}

// sqrt( integral rho^2 / integral w_tilde^2 ), both by trapezoid rule.
inline double empirical_l2_gain(const Eigen::VectorXd& rho, const Eigen::VectorXd& w_tilde,
                                double dt) {
  if (rho.size() != w_tilde.size()) throw ContractError("empirical_l2_gain: length mismatch");
  const double num = trapezoid(rho.cwiseProduct(rho), dt);
  const double den = trapezoid(w_tilde.cwiseProduct(w_tilde), dt);
  if (!(den > 0.0)) throw ContractError("empirical_l2_gain: zero disturbance energy");
  return std::sqrt(num / den);
}

struct TimeWindow {
  double t_begin = 0.0;
  double t_end = 0.0;
};

struct DissipationResult {
  Eigen::VectorXd residual;  // r(t) = dV/dt - (gamma^2 w~^2 - rho^2), central differences
  double max_gated = -std::numeric_limits<double>::infinity();
  std::int64_t gated_count = 0;  // samples that passed the ||e|| gate and exclusions
};

// Residual of the storage inequality for V = 1/2 rho^2 + 1/2 eta^2 zI^2.
// Certified only where the auxiliary law is approximately realized
// (||e|| < e_tol) and outside the excluded windows; elsewhere the residual
// series is informational. dV/dt uses central differences so the check stays
// independent of the controller implementation.
inline DissipationResult dissipation_residual(const Eigen::VectorXd& rho,
                                              const Eigen::VectorXd& z_tilde_I,
                                              const Eigen::VectorXd& w_tilde,
                                              const Eigen::VectorXd& e_norm, double gamma,
                                              double eta, double dt, double e_tol,
                                              const std::vector<TimeWindow>& exclude = {},
                                              double t0 = 0.0) {
  const Eigen::Index n = rho.size();
  if (z_tilde_I.size() != n || w_tilde.size() != n || e_norm.size() != n)
    throw ContractError("dissipation_residual: length mismatch");
  DissipationResult out;
  out.residual = Eigen::VectorXd::Zero(n);
  if (n < 3) return out;

  Eigen::VectorXd V = 0.5 * rho.cwiseProduct(rho) +
                      0.5 * eta * eta * z_tilde_I.cwiseProduct(z_tilde_I);
  for (Eigen::Index k = 1; k + 1 < n; ++k) {
    const double dV = (V[k + 1] - V[k - 1]) / (2.0 * dt);
    out.residual[k] = dV - (gamma * gamma * w_tilde[k] * w_tilde[k] - rho[k] * rho[k]);
    const double t = t0 + static_cast<double>(k) * dt;
    bool excluded = false;
    for (const auto& w : exclude)
      if (t >= w.t_begin && t < w.t_end) {
        excluded = true;
        break;
      }
    if (excluded || !(e_norm[k] < e_tol)) continue;
    ++out.gated_count;
    out.max_gated = std::max(out.max_gated, out.residual[k]);
  }
  out.residual[0] = out.residual[1];
  out.residual[n - 1] = out.residual[n - 2];
  return out;
}

struct TrackingStats {
  double rms = 0.0;
  double max_dev = 0.0;
  // First time after the fault at which the signal stays inside the
  // threshold band for hold_time seconds; unset when it never recovers.
  std::optional<double> recovery_time;
};

inline TrackingStats tracking_stats(const Eigen::VectorXd& z, double z0, double dt,
                                    double threshold = 0.0, double t_fault = 0.0,
                                    double hold_time = 5.0, double t0 = 0.0) {
  TrackingStats s;
  const Eigen::VectorXd dev = (z.array() - z0).abs();
  s.rms = std::sqrt(dev.cwiseProduct(dev).mean());
  s.max_dev = dev.maxCoeff();
  if (threshold > 0.0) {
    // a streak of hold_steps + 1 samples spans exactly hold_time
    const auto hold_steps = static_cast<Eigen::Index>(std::llround(hold_time / dt));
    Eigen::Index run = 0;
    for (Eigen::Index k = 0; k < z.size(); ++k) {
      const double t = t0 + static_cast<double>(k) * dt;
      if (t < t_fault || dev[k] >= threshold) {
        run = 0;
        continue;
      }
      if (++run >= hold_steps + 1) {
        s.recovery_time = t - hold_time;
        break;
      }
    }
  }
  return s;
}

struct WindowStats {
  double t_begin = 0.0;
  double t_end = 0.0;
  double z_max_dev = 0.0;
  double z_rms = 0.0;
  double theta_check_peak = 0.0;
  double beta_min = 0.0;
};

struct RunMetrics {
  double l2_gain_emp = 0.0;
  double max_dissipation_residual = 0.0;
  std::int64_t dissipation_gated_samples = 0;
  double z_rms_dev = 0.0;
  double z_max_dev = 0.0;
  double phi_rms_dev = 0.0;
  std::optional<double> phi_recovery_time;
  std::vector<WindowStats> fault_window_stats;
};

struct MetricDelta {
  std::string name;
  double a = 0.0;
  double b = 0.0;
  double delta = 0.0;    // b - a
  double percent = 0.0;  // 100 (b - a) / |a|, 0 when a == 0
};

// Side-by-side deltas, no judgment past the sign.
inline std::vector<MetricDelta> compare_runs(const RunMetrics& a, const RunMetrics& b) {
  auto row = [](const std::string& name, double va, double vb) {
    MetricDelta d{name, va, vb, vb - va, 0.0};
    if (va != 0.0) d.percent = 100.0 * (vb - va) / std::abs(va);
    return d;
  };
  return {
      row("l2_gain_emp", a.l2_gain_emp, b.l2_gain_emp),
      row("max_dissipation_residual", a.max_dissipation_residual, b.max_dissipation_residual),
      row("z_rms_dev", a.z_rms_dev, b.z_rms_dev),
      row("z_max_dev", a.z_max_dev, b.z_max_dev),
      row("phi_rms_dev", a.phi_rms_dev, b.phi_rms_dev),
  };
}

}  // namespace faultsim::metrics
