#include <CLI11.hpp>
#include <filesystem>
#include <iostream>

#include "faultsim/core/integrator.hpp"
#include "faultsim/harness/csv.hpp"
#include "faultsim/harness/numfmt.hpp"
#include "faultsim/harness/scenario.hpp"
#include "faultsim/harness/svg.hpp"
#include "faultsim/harness/sweep.hpp"

namespace fs = std::filesystem;
using namespace faultsim;

namespace {

// Exit codes: 0 ok, 2 config error, 3 gain-check failure under strict,
// 4 integration failure, 1 anything else.
constexpr int kOk = 0;
constexpr int kConfigExit = 2;
constexpr int kGainExit = 3;
constexpr int kIntegrationExit = 4;

harness::ScenarioConfig load(const std::string& path) {
  return path.empty() ? harness::default_config() : harness::parse_config_file(path);
}

int cmd_simulate(const std::string& config, std::optional<std::uint64_t> seed,
                 const std::string& out, bool strict) {
  auto cfg = load(config);
  if (seed) cfg.wind.seed = *seed;
  if (strict) cfg.strict = true;
  if (cfg.outputs.csv.empty()) cfg.outputs.csv = cfg.name + "_traj.csv";
  if (cfg.outputs.report.empty()) cfg.outputs.report = cfg.name + "_metrics.txt";

  const auto result = harness::run_scenario(cfg);
  const auto paths = harness::write_outputs(cfg, result, out);

  std::cout << harness::build_report(cfg, result).to_string();
  for (const auto& p : paths) std::cout << "wrote " << p << "\n";
  for (const auto& w : result.gains.warnings) std::cerr << "warning: " << w << "\n";
  return kOk;
}

int cmd_check_gains(const std::string& config) {
  const auto cfg = load(config);
  const auto cert = harness::certify_gains(cfg);

  std::cout << "gain certification for scenario '" << cfg.name << "'\n";
  std::cout << "  k1 condition: k1 = " << harness::format_double(cfg.gains_hl.k1)
            << ", threshold = " << harness::format_double(cert.k1.threshold) << ", margin = "
            << harness::format_double(cfg.gains_hl.k1 - cert.k1.threshold) << " -> "
            << (cert.k1.satisfied ? "satisfied" : "NOT satisfied") << "\n";
  std::cout << "  k2 condition: a_r = " << harness::format_double(cert.k2.a_r)
            << ", max eig = " << harness::format_double(cert.k2.max_eig) << " -> "
            << (cert.k2.satisfied ? "satisfied" : "NOT satisfied") << "\n";
  std::cout << "  low-level gain bound lambda1/lambda2 = "
            << harness::format_double(cfg.gains_ll.gain_bound()) << "\n\n";

  harness::Report rep;
  rep.add("k1", cfg.gains_hl.k1);
  rep.add("k1.threshold", cert.k1.threshold);
  rep.add("k1.satisfied", cert.k1.satisfied);
  rep.add("k2.a_r", cert.k2.a_r);
  rep.add("k2.max_eig", cert.k2.max_eig);
  rep.add("k2.satisfied", cert.k2.satisfied);
  rep.add("ll_gain_bound", cfg.gains_ll.gain_bound());
  std::cout << rep.to_string();

  if (cfg.strict && (!cert.k1.satisfied || !cert.k2.satisfied)) return kGainExit;
  return kOk;
}

int cmd_sweep(const std::string& config_dir, const std::string& out) {
  std::vector<harness::SweepEntry> entries;
  std::vector<fs::path> files;
  for (const auto& de : fs::directory_iterator(config_dir))
    if (de.is_regular_file() && de.path().extension() == ".ini") files.push_back(de.path());
  std::sort(files.begin(), files.end());
  if (files.empty()) throw ConfigError("sweep: no .ini configs in " + config_dir);

  for (const auto& f : files) {
    auto cfg = harness::parse_config_file(f.string());
    if (cfg.name == "default") cfg.name = f.stem().string();
    entries.push_back({cfg.name, std::move(cfg)});
  }
  const auto report = harness::run_sweep(entries, out);
  const std::string table = report.to_csv();
  std::cout << table;
  if (!out.empty()) {
    fs::create_directories(out);
    const auto p = fs::path(out) / "sweep_report.csv";
    std::ofstream os(p, std::ios::binary);
    if (!os) throw IoError("cannot open for writing: " + p.string());
    os << table;
    std::cout << "wrote " << p.string() << "\n";
  }
  for (const auto& r : report.rows)
    if (!r.ok) return 1;
  return kOk;
}

int cmd_dump_config(const std::string& config) {
  std::cout << harness::dump_config(load(config));
  return kOk;
}

int cmd_plot(const std::string& traj_path, const std::vector<std::string>& channels,
             const std::string& out) {
  const auto traj = harness::import_csv(traj_path);
  harness::emit_svg(traj, channels, out);
  std::cout << "wrote " << out << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fault-tolerant hierarchical pitch-control simulator"};
  app.require_subcommand(1);

  std::string config, out, config_dir, traj_path, svg_out;
  std::optional<std::uint64_t> seed;
  bool strict = false;
  std::vector<std::string> channels;

  auto* sim = app.add_subcommand("simulate", "run one scenario and emit outputs");
  sim->add_option("--config", config, "scenario config file (defaults when omitted)");
  sim->add_option("--seed", seed, "override wind.seed");
  sim->add_option("--out", out, "output directory for relative paths");
  sim->add_flag("--strict", strict, "fail on gain-condition violations");

  auto* chk = app.add_subcommand("check-gains", "evaluate both gain sufficient conditions");
  chk->add_option("--config", config, "scenario config file");

  auto* swp = app.add_subcommand("sweep", "run every .ini scenario in a directory");
  swp->add_option("--config-dir", config_dir, "directory of scenario configs")->required();
  swp->add_option("--out", out, "output directory");

  auto* dmp = app.add_subcommand("dump-config", "print the fully resolved config");
  dmp->add_option("--config", config, "scenario config file");

  auto* plt = app.add_subcommand("plot", "render trajectory channels to SVG");
  plt->add_option("--traj", traj_path, "trajectory CSV")->required();
  plt->add_option("--channels", channels, "channel groups (e.g. z beta theta_check)")
      ->required()
      ->delimiter(',');
  plt->add_option("--out", svg_out, "output SVG path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kConfigExit;
  }

  try {
    if (sim->parsed()) return cmd_simulate(config, seed, out, strict);
    if (chk->parsed()) return cmd_check_gains(config);
    if (swp->parsed()) return cmd_sweep(config_dir, out);
    if (dmp->parsed()) return cmd_dump_config(config);
    if (plt->parsed()) return cmd_plot(traj_path, channels, svg_out);
  } catch (const GainCheckError& e) {
    std::cerr << "gain check: " << e.what() << "\n";
    return kGainExit;
  } catch (const core::IntegrationFailure& e) {
    std::cerr << "integration failure at t = " << e.t << ": " << e.what() << "\n";
    if (e.last_valid) {
      const auto& sv = *e.last_valid;
      std::cerr << "last valid state:\n";
      for (Eigen::Index i = 0; i < sv.size(); ++i)
        std::cerr << "  " << sv.layout().name(i) << " = " << sv[i] << "\n";
    }
    return kIntegrationExit;
  } catch (const IntegrationError& e) {
    std::cerr << "integration failure at t = " << e.t << ": " << e.what() << "\n";
    return kIntegrationExit;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigExit;
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return kConfigExit;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return kOk;
}
