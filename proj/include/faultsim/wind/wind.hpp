#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "faultsim/core/time_grid.hpp"
#include "faultsim/errors.hpp"

namespace faultsim::wind {

struct WindConfig {
  double w0 = 22.0;      // m/s mean
  double w_min = 11.4;   // m/s hard lower clamp
  double w_max = 25.0;   // m/s hard upper clamp
  double tau_c = 10.0;   // s correlation time
  double sigma = 0.8;    // m/s diffusion
  std::uint64_t seed = 1;

  void validate() const {
    if (!(w_min < w0 && w0 < w_max)) throw ConfigError("WindConfig: need w_min < w0 < w_max");
    if (!(tau_c > 0.0)) throw ConfigError("WindConfig: tau_c must be > 0");
    if (!(sigma >= 0.0)) throw ConfigError("WindConfig: sigma must be >= 0");
  }
};

// Identifier recorded in output metadata so other implementations can
// reproduce the series bit-exactly. Sampling recipe (one gaussian per step):
// draw two 64-bit words from std::mt19937_64, map each to (0,1) via
// u = (word >> 11) + 0.5) * 2^-53, return sqrt(-2 ln u1) cos(2 pi u2).
inline constexpr const char* kRngAlgorithm = "mt19937_64+box-muller.v1";

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform01() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1p-53;
  }

  double gaussian() {
    const double u1 = uniform01();
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::mt19937_64 engine_;
};

// Exact Ornstein-Uhlenbeck transition toward w0 over one step, then clamp.
// dw = -(w - w0)/tau_c dt + sigma dB, so the stationary std is
// sigma sqrt(tau_c / 2).
inline double wind_step(double w, double dt, const WindConfig& cfg, Rng& rng) {
  if (!(dt > 0.0)) throw ConfigError("wind_step: dt must be > 0");
  const double a = std::exp(-dt / cfg.tau_c);
  const double s = cfg.sigma * std::sqrt(cfg.tau_c / 2.0 * (1.0 - a * a));
  const double next = cfg.w0 + (w - cfg.w0) * a + s * rng.gaussian();
  return std::clamp(next, cfg.w_min, cfg.w_max);
}

// One sample per grid point, starting at w0. Same (cfg, grid) => identical
// series.
inline Eigen::VectorXd wind_series(const WindConfig& cfg, const core::TimeGrid& grid) {
  cfg.validate();
  grid.validate();
  Rng rng(cfg.seed);
  const auto steps = grid.step_count();
  Eigen::VectorXd w(steps + 1);
  w[0] = cfg.w0;
  for (std::int64_t k = 0; k < steps; ++k) w[k + 1] = wind_step(w[k], grid.dt, cfg, rng);
  return w;
}

// Piecewise-linear evaluation of a gridded series at arbitrary times
// (RK4 stage times fall between grid points).
class GriddedSeries {
 public:
  GriddedSeries(core::TimeGrid grid, Eigen::VectorXd samples)
      : grid_(grid), samples_(std::move(samples)) {
    if (samples_.size() != grid_.step_count() + 1)
      throw ConfigError("GriddedSeries: sample count does not match grid");
  }

  double operator()(double t) const {
    const double s = (t - grid_.t0) / grid_.dt;
    const auto last = grid_.step_count();
    if (s <= 0.0) return samples_[0];
    if (s >= static_cast<double>(last)) return samples_[last];
    const auto k = static_cast<std::int64_t>(s);
    const double frac = s - static_cast<double>(k);
    return samples_[k] + frac * (samples_[k + 1] - samples_[k]);
  }

  const Eigen::VectorXd& samples() const { return samples_; }

 private:
  core::TimeGrid grid_;
  Eigen::VectorXd samples_;
};

// Externally supplied (t, w) trace with linear interpolation between samples.
struct WindTrace {
  std::vector<double> t;
  std::vector<double> w;

  void validate() const {
    if (t.size() != w.size() || t.size() < 2)
      throw ConfigError("WindTrace: need >= 2 (t, w) samples of equal length");
    for (size_t i = 1; i < t.size(); ++i)
      if (!(t[i] > t[i - 1])) throw ConfigError("WindTrace: times must be strictly increasing");
  }

  double operator()(double tt) const {
    if (tt <= t.front()) return w.front();
    if (tt >= t.back()) return w.back();
    const auto it = std::upper_bound(t.begin(), t.end(), tt);
    const size_t k = static_cast<size_t>(it - t.begin()) - 1;
    const double frac = (tt - t[k]) / (t[k + 1] - t[k]);
    return w[k] + frac * (w[k + 1] - w[k]);
  }

  // Resample onto a grid, clamping into the configured bounds.
  Eigen::VectorXd resample(const WindConfig& cfg, const core::TimeGrid& grid) const {
    validate();
    Eigen::VectorXd out(grid.step_count() + 1);
    for (std::int64_t k = 0; k <= grid.step_count(); ++k)
      out[k] = std::clamp((*this)(grid.time_at(k)), cfg.w_min, cfg.w_max);
    return out;
  }
};

}  // namespace faultsim::wind
