#pragma once

// Test-only single-actuator identification rig: one actuator, its regression
// filters and its estimator integrated jointly, with a known ground-truth
// parameter vector. Used by the estimator unit tests and the acceptance
// suite.

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <memory>

#include "faultsim/core/integrator.hpp"
#include "faultsim/estimator/least_squares.hpp"
#include "faultsim/estimator/regression.hpp"
#include "faultsim/plant/actuator.hpp"

namespace faultsim::testing {

struct IdentificationRun {
  std::vector<double> t;
  std::vector<Eigen::Vector2d> theta_hat;
  std::vector<Eigen::Matrix2d> P;
  Eigen::Vector2d theta_true;
};

// Layout: [x1, x2, xf1, xf2, uf, th_w, th_z, P11, P21, P12, P22]
inline IdentificationRun run_identification(
    const plant::ActuatorParams& truth, const Eigen::Vector2d& theta0,
    const std::function<double(double)>& input, double tf, double dt,
    const est::EstimatorConfig& ec = {}) {
  auto layout = std::make_shared<core::StateLayout>(std::vector<std::string>{
      "x1", "x2", "xf1", "xf2", "uf", "th_w", "th_z", "P11", "P21", "P12", "P22"});
  Eigen::VectorXd v0 = Eigen::VectorXd::Zero(11);
  v0.segment<2>(5) = theta0;
  Eigen::Map<Eigen::Matrix2d>(v0.data() + 7) = ec.p0_scale * Eigen::Matrix2d::Identity();

  auto deriv = [&](double t, const core::StateVector& s, Eigen::VectorXd& d) {
    const auto& v = s.values();
    d.resize(11);
    const double u = input(t);
    const Eigen::Vector2d x = v.segment<2>(0);
    const Eigen::Vector2d xf = v.segment<2>(2);
    d.segment<2>(0) = plant::actuator_deriv(x, u, truth);
    d.segment<2>(2) = ec.af * (x - xf);
    d[4] = ec.af * (u - v[4]);
    const auto reg = est::regressor(xf, v[4], v[1], ec.af);
    const Eigen::Matrix2d P = Eigen::Map<const Eigen::Matrix2d>(v.data() + 7);
    const auto ed = est::estimator_deriv(v.segment<2>(5), P, reg.Y, reg.x_check, ec.mu0, ec.k0);
    d.segment<2>(5) = ed.dtheta;
    Eigen::Map<Eigen::Matrix2d>(d.data() + 7) = ed.dP;
  };

  IdentificationRun out;
  out.theta_true << truth.wn2, truth.two_zeta_wn;
  auto observer = [&](std::int64_t, double t, core::StateVector& s) {
    out.t.push_back(t);
    out.theta_hat.emplace_back(s.values().segment<2>(5));
    out.P.emplace_back(Eigen::Map<const Eigen::Matrix2d>(s.values().data() + 7));
  };
  core::StateVector x0(layout, v0);
  observer(0, 0.0, x0);
  (void)core::integrate(deriv, x0, core::TimeGrid(0.0, tf, dt), observer);
  return out;
}

// Least-squares slope and Pearson correlation of y against x.
struct LineFit {
  double slope = 0.0;
  double corr = 0.0;
};

inline LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const auto n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
    syy += y[i] * y[i];
  }
  LineFit f;
  const double vxx = sxx - sx * sx / n;
  const double vyy = syy - sy * sy / n;
  const double vxy = sxy - sx * sy / n;
  f.slope = vxy / vxx;
  f.corr = vxy / std::sqrt(vxx * vyy);
  return f;
}

}  // namespace faultsim::testing
