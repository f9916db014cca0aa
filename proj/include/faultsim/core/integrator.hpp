#pragma once

#include <Eigen/Dense>
#include <optional>
#include <utility>
#include <vector>

#include "faultsim/core/state_vector.hpp"
#include "faultsim/core/time_grid.hpp"
#include "faultsim/errors.hpp"

namespace faultsim::core {

// Integration failure carrying the last state that passed the finiteness
// scan, so callers can diagnose where the model went wrong.
struct IntegrationFailure : IntegrationError {
  IntegrationFailure(const std::string& what, double t_fail, long index_fail,
                     std::optional<StateVector> last_ok)
      : IntegrationError(what, t_fail, index_fail), last_valid(std::move(last_ok)) {}
  std::optional<StateVector> last_valid;
};

namespace detail {
template <typename Scalar>
Eigen::Index first_nonfinite(const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (!std::isfinite(v[i])) return i;
  return -1;
}
}  // namespace detail

// Classic 4-stage Runge-Kutta update on a plain vector. Deriv has signature
// void(Scalar t, const VecX& x, VecX& dxdt). Deterministic: fixed evaluation
// order, no reductions that depend on threading.
template <typename Scalar, typename Deriv>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> rk4_step_values(
    Deriv&& deriv, const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& x, Scalar t, Scalar dt) {
  using VecX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  if (!(dt > Scalar(0))) throw ConfigError("rk4_step: dt must be > 0");
  const Eigen::Index n = x.size();
  VecX k1(n), k2(n), k3(n), k4(n), work(n);

  deriv(t, x, k1);
  work = x + (dt / Scalar(2)) * k1;
  deriv(t + dt / Scalar(2), work, k2);
  work = x + (dt / Scalar(2)) * k2;
  deriv(t + dt / Scalar(2), work, k3);
  work = x + dt * k3;
  deriv(t + dt, work, k4);

  VecX next = x + (dt / Scalar(6)) * (k1 + Scalar(2) * k2 + Scalar(2) * k3 + k4);
  const Eigen::Index bad = detail::first_nonfinite(next);
  if (bad >= 0)
    throw IntegrationError("rk4_step: non-finite state component after step", double(t), bad);
  return next;
}

template <typename Deriv>
StateVector rk4_step(Deriv&& deriv, const StateVector& x, double t, double dt) {
  auto values = rk4_step_values<double>(
      [&](double tt, const Eigen::VectorXd& v, Eigen::VectorXd& out) {
        deriv(tt, StateVector(x.layout_ptr(), v), out);
      },
      x.values(), t, dt);
  return StateVector(x.layout_ptr(), std::move(values));
}

// Every accepted sample of one integration, including the initial state.
struct SampledTrajectory {
  std::shared_ptr<const StateLayout> layout;
  std::vector<double> times;
  Eigen::MatrixXd states;  // row k = state at times[k]

  std::int64_t rows() const { return static_cast<std::int64_t>(times.size()); }
};

struct NullObserver {
  void operator()(std::int64_t, double, StateVector&) const {}
};

// Fixed-step RK4 over the grid. The observer runs after each accepted step
// and may adjust the state (e.g. covariance projection); the stored sample
// reflects the adjustment. Throws IntegrationFailure with the last valid
// state attached.
template <typename Deriv, typename Observer = NullObserver>
SampledTrajectory integrate(Deriv&& deriv, const StateVector& x0, const TimeGrid& grid,
                            Observer&& observer = Observer{}) {
  grid.validate();
  const std::int64_t steps = grid.step_count();
  const Eigen::Index n = x0.size();

  SampledTrajectory traj;
  traj.layout = x0.layout_ptr();
  traj.times.reserve(static_cast<size_t>(steps) + 1);
  traj.states.resize(steps + 1, n);

  StateVector x = x0;
  {
    const Eigen::Index bad = x.first_nonfinite();
    if (bad >= 0)
      throw IntegrationFailure("integrate: non-finite initial state", grid.t0, bad, std::nullopt);
  }
  traj.times.push_back(grid.t0);
  traj.states.row(0) = x.values().transpose();

  Eigen::VectorXd dxdt(n);
  auto raw_deriv = [&](double tt, const Eigen::VectorXd& v, Eigen::VectorXd& out) {
    deriv(tt, StateVector(x.layout_ptr(), v), out);
  };

  for (std::int64_t k = 0; k < steps; ++k) {
    const double t = grid.time_at(k);
    try {
      x.values() = rk4_step_values<double>(raw_deriv, x.values(), t, grid.dt);
    } catch (const IntegrationError& e) {
      StateVector last(x.layout_ptr(), traj.states.row(k).transpose());
      throw IntegrationFailure(std::string(e.what()) + " (propagated)", e.t, e.index,
                               std::move(last));
    } catch (const Error& e) {
      // model singularity or contract violation inside a stage evaluation
      StateVector last(x.layout_ptr(), traj.states.row(k).transpose());
      throw IntegrationFailure(std::string(e.what()), t, -1, std::move(last));
    }
    const double t_next = grid.time_at(k + 1);
    observer(k + 1, t_next, x);
    traj.times.push_back(t_next);
    traj.states.row(k + 1) = x.values().transpose();
  }
  return traj;
}

}  // namespace faultsim::core
