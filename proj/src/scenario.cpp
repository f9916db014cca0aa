#include "faultsim/harness/scenario.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "faultsim/allocator/splitter.hpp"
#include "faultsim/controller/laws.hpp"
#include "faultsim/core/integrator.hpp"
#include "faultsim/estimator/least_squares.hpp"
#include "faultsim/estimator/regression.hpp"
#include "faultsim/harness/csv.hpp"
#include "faultsim/harness/numfmt.hpp"
#include "faultsim/harness/svg.hpp"
#include "faultsim/plant/actuator.hpp"
#include "faultsim/plant/faults.hpp"
#include "faultsim/plant/rotor.hpp"
#include "faultsim/wind/wind.hpp"

namespace faultsim::harness {

namespace {

// Flat layout: [z, zI, x (2n), xf (2n), uf (n), theta_hat (2n), vec(P) (4n)].
struct Layout {
  int n;
  Eigen::Index z = 0, zI = 1, x, xf, uf, th, P, total;

  explicit Layout(int n_actuators) : n(n_actuators) {
    x = 2;
    xf = x + 2 * n;
    uf = xf + 2 * n;
    th = uf + n;
    P = th + 2 * n;
    total = P + 4 * n;
  }

  std::shared_ptr<const core::StateLayout> names() const {
    std::vector<std::string> v = {"z", "zI"};
    auto per = [&](const char* base, int per_act) {
      for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= per_act; ++j)
          v.push_back(std::string(base) + std::to_string(j) + "_" + std::to_string(i));
    };
    per("x", 2);
    per("xf", 2);
    for (int i = 1; i <= n; ++i) v.push_back("uf_" + std::to_string(i));
    for (int i = 1; i <= n; ++i) {
      v.push_back("wn2_hat_" + std::to_string(i));
      v.push_back("tzw_hat_" + std::to_string(i));
    }
    for (int i = 1; i <= n; ++i)
      for (const char* e : {"11", "21", "12", "22"})
        v.push_back("P" + std::to_string(i) + "_" + e);
    return std::make_shared<core::StateLayout>(std::move(v));
  }
};

// Everything the derivative and the per-step recorder need.
struct Loop {
  const ScenarioConfig& cfg;
  Layout lay;
  plant::OperatingPoint op;
  wind::GriddedSeries wind_of_t;
  Eigen::VectorXd ctl0;  // C^T l0
  std::optional<alloc::HysteresisClassifier> classifier;

  Loop(const ScenarioConfig& c, plant::OperatingPoint op_, wind::GriddedSeries ws)
      : cfg(c), lay(c.n_actuators), op(std::move(op_)), wind_of_t(std::move(ws)),
        ctl0(ctrl::c_transpose_l0(c.gains_hl.l0)) {
    if (cfg.allocator.hysteresis && cfg.allocator.mode == AllocatorMode::Splitter)
      classifier.emplace(lay.n, cfg.allocator.tau_on, cfg.allocator.tau_off);
  }

  struct Eval {
    double w = 0, rho = 0, phi = 0, s = 0;
    Eigen::VectorXd theta_check, beta, u, e;
  };

  Eigen::Vector2d theta_hat(const Eigen::VectorXd& v, int i) const {
    return v.segment<2>(lay.th + 2 * i);
  }
  Eigen::Matrix2d P_of(const Eigen::VectorXd& v, int i) const {
    return Eigen::Map<const Eigen::Matrix2d>(v.data() + lay.P + 4 * i);
  }

  Eval evaluate(double t, const Eigen::VectorXd& v) const {
    Eval ev;
    ev.w = wind_of_t(t);
    ev.rho = ctrl::filtered_error(v[lay.z], cfg.z0, v[lay.zI], cfg.gains_hl.eta);

    ev.theta_check.resize(lay.n);
    for (int i = 0; i < lay.n; ++i)
      ev.theta_check[i] = est::deviation_indicator(theta_hat(v, i), cfg.deviation);

    switch (cfg.allocator.mode) {
      case AllocatorMode::UniformAblation:
        ev.beta = Eigen::VectorXd::Constant(lay.n, 1.0 / lay.n);
        break;
      case AllocatorMode::KnownFaultSet: {
        std::vector<bool> mask(static_cast<size_t>(lay.n));
        for (int i = 0; i < lay.n; ++i) mask[static_cast<size_t>(i)] = cfg.faults.active(t, i);
        ev.beta = alloc::split_with_mask(ev.theta_check, mask, cfg.allocator.tau).beta;
        alloc::apply_floor(ev.beta, cfg.allocator.beta_floor);
        break;
      }
      case AllocatorMode::Splitter:
        if (classifier)
          ev.beta = alloc::split_with_mask(ev.theta_check, classifier->state(), cfg.allocator.tau)
                        .beta;
        else
          ev.beta = alloc::split(ev.theta_check, cfg.allocator.tau).beta;
        alloc::apply_floor(ev.beta, cfg.allocator.beta_floor);
        break;
    }

    ev.e = ctrl::low_level_error(v.segment(lay.x, 2 * lay.n), op.x0, ev.rho, cfg.gains_hl.k1,
                                 cfg.gains_hl.l0);
    const auto ci = ctrl::control_input(ev.e, ev.beta, op, cfg.gains_ll.k2);
    ev.s = ci.s;
    ev.u = ci.u;

    ev.phi = 0.0;
    for (int i = 0; i < lay.n; ++i) ev.phi += v[lay.x + 2 * i] * v[lay.x + 2 * i];
    return ev;
  }

  void deriv(double t, const Eigen::VectorXd& v, Eigen::VectorXd& d) const {
    const Eval ev = evaluate(t, v);
    d.resize(lay.total);
    d[lay.z] = plant::rotor_deriv(v[lay.z], ev.w, ev.phi, cfg.rotor);
    d[lay.zI] = v[lay.z] - cfg.z0;

    for (int i = 0; i < lay.n; ++i) {
      const auto p = plant::fault_params_at(t, cfg.faults, cfg.nominal, i);
      const Eigen::Vector2d xi = v.segment<2>(lay.x + 2 * i);
      d.segment<2>(lay.x + 2 * i) = plant::actuator_deriv(xi, ev.u[i], p);
    }

    const double af = cfg.estimator.af;
    d.segment(lay.xf, 2 * lay.n) =
        af * (v.segment(lay.x, 2 * lay.n) - v.segment(lay.xf, 2 * lay.n));
    d.segment(lay.uf, lay.n) = af * (ev.u - v.segment(lay.uf, lay.n));

    for (int i = 0; i < lay.n; ++i) {
      const Eigen::Vector2d xfi = v.segment<2>(lay.xf + 2 * i);
      const auto reg = est::regressor(xfi, v[lay.uf + i], v[lay.x + 2 * i + 1], af);
      const auto ed = est::estimator_deriv(theta_hat(v, i), P_of(v, i), reg.Y, reg.x_check,
                                           cfg.estimator.mu0, cfg.estimator.k0);
      d.segment<2>(lay.th + 2 * i) = ed.dtheta;
      Eigen::Map<Eigen::Matrix2d>(d.data() + lay.P + 4 * i) = ed.dP;
    }
  }

  core::StateVector initial_state(std::shared_ptr<const core::StateLayout> names) const {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(lay.total);
    v[lay.z] = cfg.z0;
    v.segment(lay.x, 2 * lay.n) = op.x0;
    v.segment(lay.xf, 2 * lay.n) = op.x0;
    v.segment(lay.uf, lay.n) = op.u0_offset;
    for (int i = 0; i < lay.n; ++i) {
      v[lay.th + 2 * i] = cfg.nominal.wn2;
      v[lay.th + 2 * i + 1] = cfg.nominal.two_zeta_wn;
      Eigen::Map<Eigen::Matrix2d>(v.data() + lay.P + 4 * i) =
          cfg.estimator.p0_scale * Eigen::Matrix2d::Identity();
    }
    return core::StateVector(std::move(names), std::move(v));
  }
};

}  // namespace

GainCertificate certify_gains(const ScenarioConfig& cfg) {
  GainCertificate cert;
  cert.k1 = ctrl::check_k1(cfg.gains_hl);
  const std::vector<plant::ActuatorParams> acts(static_cast<size_t>(cfg.n_actuators),
                                                cfg.nominal);
  const Eigen::VectorXd uniform =
      Eigen::VectorXd::Constant(cfg.n_actuators, 1.0 / cfg.n_actuators);
  cert.k2 = ctrl::check_k2(acts, uniform, cfg.gains_ll.k2, cfg.gains_ll.alpha_l);

  if (!cert.k1.satisfied)
    cert.warnings.push_back("k1 = " + format_double(cfg.gains_hl.k1) +
                            " is below the sufficient threshold " +
                            format_double(cert.k1.threshold));
  if (!cert.k2.satisfied)
    cert.warnings.push_back("k2 violates the matrix sufficient condition (max eig " +
                            format_double(cert.k2.max_eig) + " > 0)");
  if (cfg.strict && (!cert.k1.satisfied || !cert.k2.satisfied))
    throw GainCheckError("strict: gain sufficient condition violated: " + cert.warnings.front());
  return cert;
}

ScenarioResult run_scenario(const ScenarioConfig& cfg) {
  cfg.validate();

  ScenarioResult res;
  res.gains = certify_gains(cfg);
  res.op = plant::solve_operating_point(cfg.rotor, cfg.z0, cfg.wind.w0, cfg.n_actuators);

  Eigen::VectorXd samples;
  if (!cfg.wind_trace_file.empty()) {
    wind::WindTrace trace;
    {
      std::ifstream in(cfg.wind_trace_file);
      if (!in) throw IoError("cannot open wind trace: " + cfg.wind_trace_file);
      std::string line;
      while (std::getline(in, line)) {
        if (line.empty() || line.front() == '#') continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ls(line);
        double t = 0, w = 0;
        if (!(ls >> t >> w)) throw IoError("wind trace: expected`t w` per line");
        trace.t.push_back(t);
        trace.w.push_back(w);
      }
    }
    samples = trace.resample(cfg.wind, cfg.grid);
    res.rng_algorithm = "trace:" + cfg.wind_trace_file;
  } else {
    samples = wind::wind_series(cfg.wind, cfg.grid);
    res.rng_algorithm = wind::kRngAlgorithm;
  }

  Loop loop(cfg, res.op, wind::GriddedSeries(cfg.grid, std::move(samples)));
  const auto names = loop.lay.names();
  const auto x0 = loop.initial_state(names);

  const auto steps = cfg.grid.step_count();
  const auto cols = Trajectory::standard_columns(cfg.n_actuators);
  res.trajectory = Trajectory(cols, steps + 1);

  // Side channels consumed by the metrics, not part of the CSV contract.
  Eigen::VectorXd e_norm(steps + 1), phi_des(steps + 1);

  auto record = [&](std::int64_t row, double t, const Eigen::VectorXd& v) {
    const auto ev = loop.evaluate(t, v);
    auto& traj = res.trajectory;
    Eigen::Index c = 0;
    traj.cell(row, c++) = t;
    traj.cell(row, c++) = ev.w;
    traj.cell(row, c++) = v[loop.lay.z];
    traj.cell(row, c++) = ev.rho;
    traj.cell(row, c++) = v[loop.lay.zI];
    for (int i = 0; i < loop.lay.n; ++i) {
      traj.cell(row, c++) = v[loop.lay.x + 2 * i];
      traj.cell(row, c++) = v[loop.lay.x + 2 * i + 1];
      traj.cell(row, c++) = ev.u[i];
      traj.cell(row, c++) = ev.beta[i];
      traj.cell(row, c++) = v[loop.lay.th + 2 * i];
      traj.cell(row, c++) = v[loop.lay.th + 2 * i + 1];
      traj.cell(row, c++) = ev.theta_check[i];
    }
    traj.cell(row, c++) = ev.phi;

    e_norm[row] = ev.e.norm();
    const Eigen::VectorXd y_des =
        res.op.y0 + ctrl::high_level_command(ev.rho, cfg.gains_hl.k1, cfg.gains_hl.l0)
                        (Eigen::seqN(0, loop.lay.n, 2));
    phi_des[row] = y_des.squaredNorm();
  };

  record(0, cfg.grid.t0, x0.values());

  auto observer = [&](std::int64_t k, double t, core::StateVector& sv) {
    auto& v = sv.values();
    for (int i = 0; i < loop.lay.n; ++i) {
      Eigen::Map<Eigen::Matrix2d> P(v.data() + loop.lay.P + 4 * i);
      Eigen::Matrix2d Pm = P;
      if (est::pd_project(Pm)) ++res.pd_projections;
      P = Pm;  // symmetrized (and floored, when the guard fired)
      res.p_norm_max = std::max(res.p_norm_max, est::spectral_norm_sym2(Pm));
    }
    if (v[loop.lay.z] <= 0.05)
      throw core::IntegrationFailure(
          "rotor speed fell to " + format_double(v[loop.lay.z]) +
              " rad/s (singularity guard); check gains and fault configuration",
          t, loop.lay.z, core::StateVector(sv.layout_ptr(), v));
    if (loop.classifier) {
      Eigen::VectorXd tc(loop.lay.n);
      for (int i = 0; i < loop.lay.n; ++i)
        tc[i] = est::deviation_indicator(loop.theta_hat(v, i), cfg.deviation);
      loop.classifier->update(tc);
    }
    record(k, t, v);
  };

  core::integrate([&](double t, const core::StateVector& sv,
                      Eigen::VectorXd& d) { loop.deriv(t, sv.values(), d); },
                  x0, cfg.grid, observer);

  // Metrics over the recorded channels.
  const auto& traj = res.trajectory;
  const Eigen::VectorXd rho = traj.column("rho");
  const Eigen::VectorXd zI = traj.column("zI");
  const Eigen::VectorXd z = traj.column("z");
  const Eigen::VectorXd w_tilde = traj.column("w").array() - cfg.wind.w0;
  const Eigen::VectorXd phi = traj.column("phi");
  const double dt = cfg.grid.dt;

  const double wind_energy = metrics::trapezoid(w_tilde.cwiseProduct(w_tilde), dt);
  if (wind_energy > 1e-12) {
    res.l2_gain = metrics::empirical_l2_gain(rho, w_tilde, dt);
    res.run.l2_gain_emp = *res.l2_gain;
  }

  std::vector<metrics::TimeWindow> exclusions;
  for (const auto& evn : cfg.faults.events)
    exclusions.push_back({evn.t_on, evn.t_off + cfg.metrics.transient_guard});
  const auto diss =
      metrics::dissipation_residual(rho, zI, w_tilde, e_norm, cfg.gains_hl.gamma,
                                    cfg.gains_hl.eta, dt, cfg.metrics.e_tol, exclusions,
                                    cfg.grid.t0);
  res.run.max_dissipation_residual =
      diss.gated_count > 0 ? diss.max_gated : 0.0;
  res.run.dissipation_gated_samples = diss.gated_count;

  const auto zs = metrics::tracking_stats(z, cfg.z0, dt);
  res.run.z_rms_dev = zs.rms;
  res.run.z_max_dev = zs.max_dev;

  const Eigen::VectorXd phi_err = phi - phi_des;
  res.run.phi_rms_dev = std::sqrt(phi_err.cwiseProduct(phi_err).mean());

  if (!cfg.faults.events.empty()) {
    const double first_on = cfg.faults.events.front().t_on;
    const auto phis = metrics::tracking_stats(phi_err, 0.0, dt, cfg.metrics.phi_recovery_tol,
                                              first_on, cfg.metrics.recovery_hold, cfg.grid.t0);
    res.run.phi_recovery_time = phis.recovery_time;

    for (const auto& evn : cfg.faults.events) {
      metrics::WindowStats ws;
      ws.t_begin = std::max(evn.t_on, cfg.grid.t0);
      ws.t_end = std::min(evn.t_off + cfg.metrics.transient_guard, cfg.grid.tf);
      if (!(ws.t_end > ws.t_begin)) continue;  // event outside the simulated horizon
      const auto r0 = static_cast<Eigen::Index>(std::llround((ws.t_begin - cfg.grid.t0) / dt));
      const auto r1 = static_cast<Eigen::Index>(std::llround((ws.t_end - cfg.grid.t0) / dt));
      const auto zwin = z.segment(r0, r1 - r0 + 1);
      const auto st = metrics::tracking_stats(zwin, cfg.z0, dt);
      ws.z_max_dev = st.max_dev;
      ws.z_rms = st.rms;
      ws.theta_check_peak =
          traj.column("theta_check_" + std::to_string(evn.actuator + 1)).segment(r0, r1 - r0 + 1)
              .maxCoeff();
      ws.beta_min =
          traj.column("beta_" + std::to_string(evn.actuator + 1)).segment(r0, r1 - r0 + 1)
              .minCoeff();
      res.run.fault_window_stats.push_back(ws);
    }
  }
  return res;
}

Report build_report(const ScenarioConfig& cfg, const ScenarioResult& r) {
  Report rep;
  rep.add("schema", "faultsim.metrics.v1");
  rep.add("scenario", cfg.name);
  rep.add("seed", std::to_string(cfg.wind.seed));
  rep.add("rng_algorithm", r.rng_algorithm);
  rep.add("grid.dt", cfg.grid.dt);
  rep.add("k1.threshold", r.gains.k1.threshold);
  rep.add("k1.satisfied", r.gains.k1.satisfied);
  rep.add("k2.a_r", r.gains.k2.a_r);
  rep.add("k2.max_eig", r.gains.k2.max_eig);
  rep.add("k2.satisfied", r.gains.k2.satisfied);
  rep.add("ll_gain_bound", cfg.gains_ll.gain_bound());
  rep.add("operating.y0", r.op.y0[0]);
  rep.add("operating.residual", r.op.residual(cfg.rotor));
  if (r.l2_gain) rep.add("l2_gain_emp", *r.l2_gain);
  rep.add("max_dissipation_residual", r.run.max_dissipation_residual);
  rep.add("dissipation_gated_samples",
          std::to_string(r.run.dissipation_gated_samples));
  rep.add("z_rms_dev", r.run.z_rms_dev);
  rep.add("z_max_dev", r.run.z_max_dev);
  rep.add("phi_rms_dev", r.run.phi_rms_dev);
  if (r.run.phi_recovery_time) rep.add("phi_recovery_time", *r.run.phi_recovery_time);
  for (size_t i = 0; i < r.run.fault_window_stats.size(); ++i) {
    const auto& ws = r.run.fault_window_stats[i];
    const std::string p = "fault_window." + std::to_string(i + 1) + ".";
    rep.add(p + "t_begin", ws.t_begin);
    rep.add(p + "t_end", ws.t_end);
    rep.add(p + "z_max_dev", ws.z_max_dev);
    rep.add(p + "z_rms", ws.z_rms);
    rep.add(p + "theta_check_peak", ws.theta_check_peak);
    rep.add(p + "beta_min", ws.beta_min);
  }
  rep.add("pd_projections", std::to_string(r.pd_projections));
  rep.add("p_norm_max", r.p_norm_max);
  for (size_t i = 0; i < r.gains.warnings.size(); ++i)
    rep.add("warning." + std::to_string(i + 1), r.gains.warnings[i]);
  return rep;
}

std::vector<std::string> write_outputs(const ScenarioConfig& cfg, const ScenarioResult& result,
                                       const std::string& out_dir) {
  namespace fs = std::filesystem;
  std::vector<std::string> written;
  auto resolve = [&](const std::string& p) {
    fs::path path(p);
    if (path.is_relative() && !out_dir.empty()) path = fs::path(out_dir) / path;
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    return path.string();
  };

  if (!cfg.outputs.csv.empty()) {
    const auto p = resolve(cfg.outputs.csv);
    emit_csv(result.trajectory, p);
    written.push_back(p);
  }
  if (!cfg.outputs.report.empty()) {
    const auto p = resolve(cfg.outputs.report);
    build_report(cfg, result).write(p);
    written.push_back(p);
  }
  if (cfg.outputs.svg) {
    const auto p = resolve(cfg.name + "_traj.svg");
    emit_svg(result.trajectory, cfg.outputs.svg_channels, p);
    written.push_back(p);
    if (!cfg.faults.events.empty()) {
      const auto& ev = cfg.faults.events.front();
      const auto pz = resolve(cfg.name + "_z_fault_window.svg");
      emit_svg(result.trajectory, {"z"}, pz,
               std::make_pair(std::max(cfg.grid.t0, ev.t_on - 5.0),
                              std::min(cfg.grid.tf, ev.t_off + 10.0)));
      written.push_back(pz);
    }
  }
  return written;
}

}  // namespace faultsim::harness
