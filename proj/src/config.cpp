#include "faultsim/harness/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

#include "faultsim/controller/conditions.hpp"
#include "faultsim/harness/numfmt.hpp"

namespace faultsim::harness {

void ScenarioConfig::validate() const {
  if (name.empty()) throw ConfigError("run.name must not be empty");
  rotor.validate();
  if (!(z0 > 0.0)) throw ConfigError("rotor.z0 must be > 0");
  if (n_actuators < 1) throw ConfigError("actuators.n must be >= 1");
  nominal.validate();
  fault_target.validate();
  faults.validate(n_actuators);
  wind.validate();
  gains_hl.validate();
  gains_ll.validate();
  if (gains_hl.l0.size() != n_actuators)
    throw ConfigError("gains.l0 must have one entry per actuator");
  if (gains_ll.k2.size() != 2 * n_actuators)
    throw ConfigError("gains.k2 must have two entries per actuator");
  estimator.validate();
  deviation.validate();
  if (!(allocator.tau > 0.0 && allocator.tau < 1.0))
    throw ConfigError("allocator.tau must be in (0, 1)");
  if (allocator.hysteresis && !(allocator.tau_off <= allocator.tau_on))
    throw ConfigError("allocator.tau_off must be <= allocator.tau_on");
  if (!(allocator.beta_floor >= 0.0) ||
      allocator.beta_floor * static_cast<double>(n_actuators) >= 1.0)
    throw ConfigError("allocator.beta_floor must satisfy 0 <= n * floor < 1");
  grid.validate();
  metrics.validate();
}

ScenarioConfig default_config() {
  ScenarioConfig cfg;
  plant::FaultEvent ev;
  ev.actuator = 2;  // third actuator
  ev.t_on = 75.0;
  ev.t_off = 125.0;
  ev.target = cfg.fault_target;
  ev.profile = plant::FaultProfile::Abrupt;
  cfg.faults.events.push_back(ev);
  return cfg;
}

namespace {

struct Line {
  std::string section;
  std::string key;
  std::string value;
  int number = 0;
};

std::string trim(std::string s) {
  auto issp = [](unsigned char c) { return std::isspace(c) != 0; };
  while (!s.empty() && issp(static_cast<unsigned char>(s.front()))) s.erase(s.begin());
  while (!s.empty() && issp(static_cast<unsigned char>(s.back()))) s.pop_back();
  return s;
}

[[noreturn]] void fail(const Line& l, const std::string& what) {
  throw ConfigError("config line " + std::to_string(l.number) + " (" + l.section + "." + l.key +
                    "): " + what);
}

double as_double(const Line& l) {
  try {
    return parse_double(l.value);
  } catch (const ConfigError&) {
    fail(l, "expected a number, got '" + l.value + "'");
  }
}

int as_int(const Line& l) {
  const double v = as_double(l);
  const int i = static_cast<int>(v);
  if (static_cast<double>(i) != v) fail(l, "expected an integer");
  return i;
}

std::uint64_t as_u64(const Line& l) {
  std::uint64_t v = 0;
  const char* first = l.value.data();
  const char* last = first + l.value.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last) fail(l, "expected an unsigned integer");
  return v;
}

bool as_bool(const Line& l) {
  if (l.value == "true" || l.value == "1" || l.value == "on") return true;
  if (l.value == "false" || l.value == "0" || l.value == "off") return false;
  fail(l, "expected true/false");
}

Eigen::VectorXd as_vector(const Line& l) {
  std::istringstream in(l.value);
  std::vector<double> vals;
  std::string tok;
  while (in >> tok) {
    try {
      vals.push_back(parse_double(tok));
    } catch (const ConfigError&) {
      fail(l, "expected a list of numbers");
    }
  }
  if (vals.empty()) fail(l, "expected a non-empty list of numbers");
  return Eigen::Map<Eigen::VectorXd>(vals.data(), static_cast<Eigen::Index>(vals.size()));
}

std::vector<std::string> as_names(const Line& l) {
  std::istringstream in(l.value);
  std::vector<std::string> out;
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

bool is_fault_section(const std::string& s, int& index) {
  if (s.rfind("fault.", 0) != 0) return false;
  const std::string num = s.substr(6);
  if (num.empty() || num.size() > 6 ||
      !std::all_of(num.begin(), num.end(),
                   [](unsigned char c) { return std::isdigit(c) != 0; }))
    return false;
  index = std::stoi(num);
  return index >= 1;
}

}  // namespace

ScenarioConfig parse_config(const std::string& text) {
  ScenarioConfig cfg = default_config();

  std::vector<Line> lines;
  {
    std::istringstream in(text);
    std::string raw;
    std::string section;
    int number = 0;
    while (std::getline(in, raw)) {
      ++number;
      const auto cut = raw.find_first_of("#;");
      std::string s = trim(cut == std::string::npos ? raw : raw.substr(0, cut));
      if (s.empty()) continue;
      if (s.front() == '[') {
        if (s.back() != ']') throw ConfigError("config line " + std::to_string(number) +
                                               ": unterminated section header");
        section = trim(s.substr(1, s.size() - 2));
        if (section.empty()) throw ConfigError("config line " + std::to_string(number) +
                                               ": empty section name");
        continue;
      }
      const auto eq = s.find('=');
      if (eq == std::string::npos)
        throw ConfigError("config line " + std::to_string(number) + ": expected key = value");
      Line l;
      l.section = section;
      l.key = trim(s.substr(0, eq));
      l.value = trim(s.substr(eq + 1));
      l.number = number;
      if (l.section.empty()) fail(l, "key outside any [section]");
      if (l.key.empty()) fail(l, "empty key");
      lines.push_back(std::move(l));
    }
  }

  int fault_count = static_cast<int>(cfg.faults.events.size());
  bool lambda1_set = false;
  bool lambda2_set = false;
  bool alpha_l_set = false;

  // First pass decides the event count so [fault.N] sections can resize.
  for (const auto& l : lines)
    if (l.section == "faults" && l.key == "events") fault_count = as_int(l);
  if (fault_count < 0) throw ConfigError("faults.events must be >= 0");
  {
    plant::FaultEvent tmpl = default_config().faults.events.front();
    tmpl.target = cfg.fault_target;
    cfg.faults.events.assign(static_cast<size_t>(fault_count), tmpl);
  }

  for (const auto& l : lines) {
    int ev_index = 0;
    if (l.section == "run") {
      if (l.key == "name") cfg.name = l.value;
      else if (l.key == "strict") cfg.strict = as_bool(l);
      else fail(l, "unknown key");
    } else if (l.section == "rotor") {
      if (l.key == "m1") cfg.rotor.m1 = as_double(l);
      else if (l.key == "m2") cfg.rotor.m2 = as_double(l);
      else if (l.key == "m3") cfg.rotor.m3 = as_double(l);
      else if (l.key == "c") cfg.rotor.c = as_double(l);
      else if (l.key == "J") cfg.rotor.J = as_double(l);
      else if (l.key == "P0") cfg.rotor.P0 = as_double(l);
      else if (l.key == "coupling_sign") cfg.rotor.coupling_sign = as_double(l);
      else if (l.key == "z0") cfg.z0 = as_double(l);
      else fail(l, "unknown key");
    } else if (l.section == "actuators") {
      if (l.key == "n") cfg.n_actuators = as_int(l);
      else if (l.key == "wn2") cfg.nominal.wn2 = as_double(l);
      else if (l.key == "two_zeta_wn") cfg.nominal.two_zeta_wn = as_double(l);
      else fail(l, "unknown key");
    } else if (l.section == "fault_target") {
      if (l.key == "wn2") cfg.fault_target.wn2 = as_double(l);
      else if (l.key == "two_zeta_wn") cfg.fault_target.two_zeta_wn = as_double(l);
      else fail(l, "unknown key");
    } else if (l.section == "faults") {
      if (l.key == "events") continue;  // handled in the first pass
      fail(l, "unknown key");
    } else if (is_fault_section(l.section, ev_index)) {
      if (ev_index > fault_count) fail(l, "event index exceeds faults.events");
      auto& ev = cfg.faults.events[static_cast<size_t>(ev_index - 1)];
      if (l.key == "actuator") ev.actuator = as_int(l) - 1;  // config is 1-based
      else if (l.key == "t_on") ev.t_on = as_double(l);
      else if (l.key == "t_off") ev.t_off = as_double(l);
      else if (l.key == "wn2") ev.target.wn2 = as_double(l);
      else if (l.key == "two_zeta_wn") ev.target.two_zeta_wn = as_double(l);
      else if (l.key == "ramp_time") ev.ramp_time = as_double(l);
      else if (l.key == "profile") {
        if (l.value == "abrupt") ev.profile = plant::FaultProfile::Abrupt;
        else if (l.value == "ramp") ev.profile = plant::FaultProfile::LinearRamp;
        else fail(l, "profile must be abrupt or ramp");
      } else fail(l, "unknown key");
    } else if (l.section == "wind") {
      if (l.key == "w0") cfg.wind.w0 = as_double(l);
      else if (l.key == "w_min") cfg.wind.w_min = as_double(l);
      else if (l.key == "w_max") cfg.wind.w_max = as_double(l);
      else if (l.key == "tau_c") cfg.wind.tau_c = as_double(l);
      else if (l.key == "sigma") cfg.wind.sigma = as_double(l);
      else if (l.key == "seed") cfg.wind.seed = as_u64(l);
      else if (l.key == "trace_file") cfg.wind_trace_file = l.value;
      else fail(l, "unknown key");
    } else if (l.section == "gains") {
      if (l.key == "k1") cfg.gains_hl.k1 = as_double(l);
      else if (l.key == "eta") cfg.gains_hl.eta = as_double(l);
      else if (l.key == "gamma") cfg.gains_hl.gamma = as_double(l);
      else if (l.key == "alpha") cfg.gains_hl.alpha = as_double(l);
      else if (l.key == "h_bar_z") cfg.gains_hl.h_bar_z = as_double(l);
      else if (l.key == "l_bar_w") cfg.gains_hl.l_bar_w = as_double(l);
      else if (l.key == "l0") cfg.gains_hl.l0 = as_vector(l);
      else if (l.key == "k2") cfg.gains_ll.k2 = as_vector(l);
      else if (l.key == "alpha_l") { cfg.gains_ll.alpha_l = as_double(l); alpha_l_set = true; }
      else if (l.key == "lambda1") { cfg.gains_ll.lambda1 = as_double(l); lambda1_set = true; }
      else if (l.key == "lambda2") { cfg.gains_ll.lambda2 = as_double(l); lambda2_set = true; }
      else fail(l, "unknown key");
    } else if (l.section == "estimator") {
      if (l.key == "af") cfg.estimator.af = as_double(l);
      else if (l.key == "mu0") cfg.estimator.mu0 = as_double(l);
      else if (l.key == "k0") cfg.estimator.k0 = as_double(l);
      else if (l.key == "p0_scale") cfg.estimator.p0_scale = as_double(l);
      else fail(l, "unknown key");
    } else if (l.section == "deviation") {
      if (l.key == "wn2_0") cfg.deviation.wn2_0 = as_double(l);
      else if (l.key == "tzw_0") cfg.deviation.tzw_0 = as_double(l);
      else if (l.key == "d_w") cfg.deviation.d_w = as_double(l);
      else if (l.key == "d_z") cfg.deviation.d_z = as_double(l);
      else fail(l, "unknown key");
    } else if (l.section == "allocator") {
      if (l.key == "mode") {
        if (l.value == "splitter") cfg.allocator.mode = AllocatorMode::Splitter;
        else if (l.value == "uniform-ablation") cfg.allocator.mode = AllocatorMode::UniformAblation;
        else if (l.value == "known-fault-set") cfg.allocator.mode = AllocatorMode::KnownFaultSet;
        else fail(l, "mode must be splitter, uniform-ablation or known-fault-set");
      } else if (l.key == "tau") cfg.allocator.tau = as_double(l);
      else if (l.key == "hysteresis") cfg.allocator.hysteresis = as_bool(l);
      else if (l.key == "tau_on") cfg.allocator.tau_on = as_double(l);
      else if (l.key == "tau_off") cfg.allocator.tau_off = as_double(l);
      else if (l.key == "beta_floor") cfg.allocator.beta_floor = as_double(l);
      else fail(l, "unknown key");
    } else if (l.section == "grid") {
      if (l.key == "t0") cfg.grid.t0 = as_double(l);
      else if (l.key == "tf") cfg.grid.tf = as_double(l);
      else if (l.key == "dt") cfg.grid.dt = as_double(l);
      else fail(l, "unknown key");
    } else if (l.section == "metrics") {
      if (l.key == "e_tol") cfg.metrics.e_tol = as_double(l);
      else if (l.key == "transient_guard") cfg.metrics.transient_guard = as_double(l);
      else if (l.key == "z_recovery_tol") cfg.metrics.z_recovery_tol = as_double(l);
      else if (l.key == "phi_recovery_tol") cfg.metrics.phi_recovery_tol = as_double(l);
      else if (l.key == "recovery_hold") cfg.metrics.recovery_hold = as_double(l);
      else fail(l, "unknown key");
    } else if (l.section == "outputs") {
      if (l.key == "csv") cfg.outputs.csv = l.value;
      else if (l.key == "report") cfg.outputs.report = l.value;
      else if (l.key == "svg") cfg.outputs.svg = as_bool(l);
      else if (l.key == "svg_channels") cfg.outputs.svg_channels = as_names(l);
      else fail(l, "unknown key");
    } else {
      fail(l, "unknown section");
    }
  }

  if (lambda1_set != lambda2_set)
    throw ConfigError("gains.lambda1 and gains.lambda2 must be set together");
  if (!lambda1_set) cfg.gains_ll.set_balanced_lambdas();
  (void)alpha_l_set;

  cfg.validate();

  if (cfg.strict) {
    const auto k1 = ctrl::check_k1(cfg.gains_hl);
    if (!k1.satisfied)
      throw GainCheckError("strict: k1 = " + format_double(cfg.gains_hl.k1) +
                           " violates the sufficient condition (threshold " +
                           format_double(k1.threshold) + ")");
  }
  return cfg;
}

ScenarioConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

namespace {

std::string vec_str(const Eigen::VectorXd& v) {
  std::string s;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) s += ' ';
    s += format_double(v[i]);
  }
  return s;
}

}  // namespace

std::string dump_config(const ScenarioConfig& cfg) {
  std::ostringstream o;
  const auto d = [](double v) { return format_double(v); };
  o << "[run]\n";
  o << "name = " << cfg.name << "\n";
  o << "strict = " << (cfg.strict ? "true" : "false") << "\n\n";

  o << "[rotor]\n";
  o << "m1 = " << d(cfg.rotor.m1) << "\n";
  o << "m2 = " << d(cfg.rotor.m2) << "\n";
  o << "m3 = " << d(cfg.rotor.m3) << "\n";
  o << "c = " << d(cfg.rotor.c) << "\n";
  o << "J = " << d(cfg.rotor.J) << "\n";
  o << "P0 = " << d(cfg.rotor.P0) << "\n";
  o << "z0 = " << d(cfg.z0) << "\n";
  o << "coupling_sign = " << d(cfg.rotor.coupling_sign) << "\n\n";

  o << "[actuators]\n";
  o << "n = " << cfg.n_actuators << "\n";
  o << "wn2 = " << d(cfg.nominal.wn2) << "\n";
  o << "two_zeta_wn = " << d(cfg.nominal.two_zeta_wn) << "\n\n";

  o << "[fault_target]\n";
  o << "wn2 = " << d(cfg.fault_target.wn2) << "\n";
  o << "two_zeta_wn = " << d(cfg.fault_target.two_zeta_wn) << "\n\n";

  o << "[faults]\n";
  o << "events = " << cfg.faults.events.size() << "\n\n";
  for (size_t i = 0; i < cfg.faults.events.size(); ++i) {
    const auto& ev = cfg.faults.events[i];
    o << "[fault." << (i + 1) << "]\n";
    o << "actuator = " << (ev.actuator + 1) << "\n";
    o << "t_on = " << d(ev.t_on) << "\n";
    o << "t_off = " << d(ev.t_off) << "\n";
    o << "profile = " << (ev.profile == plant::FaultProfile::Abrupt ? "abrupt" : "ramp") << "\n";
    if (ev.profile == plant::FaultProfile::LinearRamp)
      o << "ramp_time = " << d(ev.ramp_time) << "\n";
    o << "wn2 = " << d(ev.target.wn2) << "\n";
    o << "two_zeta_wn = " << d(ev.target.two_zeta_wn) << "\n\n";
  }

  o << "[wind]\n";
  o << "w0 = " << d(cfg.wind.w0) << "\n";
  o << "w_min = " << d(cfg.wind.w_min) << "\n";
  o << "w_max = " << d(cfg.wind.w_max) << "\n";
  o << "tau_c = " << d(cfg.wind.tau_c) << "\n";
  o << "sigma = " << d(cfg.wind.sigma) << "\n";
  o << "seed = " << cfg.wind.seed << "\n";
  if (!cfg.wind_trace_file.empty()) o << "trace_file = " << cfg.wind_trace_file << "\n";
  o << "\n";

  o << "[gains]\n";
  o << "k1 = " << d(cfg.gains_hl.k1) << "\n";
  o << "eta = " << d(cfg.gains_hl.eta) << "\n";
  o << "gamma = " << d(cfg.gains_hl.gamma) << "\n";
  o << "alpha = " << d(cfg.gains_hl.alpha) << "\n";
  o << "h_bar_z = " << d(cfg.gains_hl.h_bar_z) << "\n";
  o << "l_bar_w = " << d(cfg.gains_hl.l_bar_w) << "\n";
  o << "l0 = " << vec_str(cfg.gains_hl.l0) << "\n";
  o << "k2 = " << vec_str(cfg.gains_ll.k2) << "\n";
  o << "alpha_l = " << d(cfg.gains_ll.alpha_l) << "\n";
  o << "lambda1 = " << d(cfg.gains_ll.lambda1) << "\n";
  o << "lambda2 = " << d(cfg.gains_ll.lambda2) << "\n\n";

  o << "[estimator]\n";
  o << "af = " << d(cfg.estimator.af) << "\n";
  o << "mu0 = " << d(cfg.estimator.mu0) << "\n";
  o << "k0 = " << d(cfg.estimator.k0) << "\n";
  o << "p0_scale = " << d(cfg.estimator.p0_scale) << "\n\n";

  o << "[deviation]\n";
  o << "wn2_0 = " << d(cfg.deviation.wn2_0) << "\n";
  o << "tzw_0 = " << d(cfg.deviation.tzw_0) << "\n";
  o << "d_w = " << d(cfg.deviation.d_w) << "\n";
  o << "d_z = " << d(cfg.deviation.d_z) << "\n\n";

  o << "[allocator]\n";
  const char* mode = cfg.allocator.mode == AllocatorMode::Splitter          ? "splitter"
                     : cfg.allocator.mode == AllocatorMode::UniformAblation ? "uniform-ablation"
                                                                            : "known-fault-set";
  o << "mode = " << mode << "\n";
  o << "tau = " << d(cfg.allocator.tau) << "\n";
  o << "hysteresis = " << (cfg.allocator.hysteresis ? "true" : "false") << "\n";
  o << "tau_on = " << d(cfg.allocator.tau_on) << "\n";
  o << "tau_off = " << d(cfg.allocator.tau_off) << "\n";
  o << "beta_floor = " << d(cfg.allocator.beta_floor) << "\n\n";

  o << "[grid]\n";
  o << "t0 = " << d(cfg.grid.t0) << "\n";
  o << "tf = " << d(cfg.grid.tf) << "\n";
  o << "dt = " << d(cfg.grid.dt) << "\n\n";

  o << "[metrics]\n";
  o << "e_tol = " << d(cfg.metrics.e_tol) << "\n";
  o << "transient_guard = " << d(cfg.metrics.transient_guard) << "\n";
  o << "z_recovery_tol = " << d(cfg.metrics.z_recovery_tol) << "\n";
  o << "phi_recovery_tol = " << d(cfg.metrics.phi_recovery_tol) << "\n";
  o << "recovery_hold = " << d(cfg.metrics.recovery_hold) << "\n\n";

  o << "[outputs]\n";
  o << "csv = " << cfg.outputs.csv << "\n";
  o << "report = " << cfg.outputs.report << "\n";
  o << "svg = " << (cfg.outputs.svg ? "true" : "false") << "\n";
  o << "svg_channels =";
  for (const auto& c : cfg.outputs.svg_channels) o << ' ' << c;
  o << "\n";
  return o.str();
}

}  // namespace faultsim::harness
