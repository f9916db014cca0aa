#include "faultsim/harness/sweep.hpp"

#include <algorithm>
#include <future>
#include <set>
#include <thread>

#include "faultsim/harness/numfmt.hpp"
#include "faultsim/harness/scenario.hpp"

namespace faultsim::harness {

std::string SweepReport::to_csv() const {
  std::string out =
      "scenario,status,l2_gain_emp,max_dissipation_residual,z_rms_dev,z_max_dev,phi_rms_dev,"
      "phi_recovery_time,error\n";
  for (const auto& r : rows) {
    out += r.name;
    out += r.ok ? ",ok," : ",failed,";
    auto opt = [](const std::optional<double>& v) {
      return v ? format_double(*v) : std::string();
    };
    if (r.ok) {
      out += opt(r.l2_gain) + ',';
      out += format_double(r.run.max_dissipation_residual) + ',';
      out += format_double(r.run.z_rms_dev) + ',';
      out += format_double(r.run.z_max_dev) + ',';
      out += format_double(r.run.phi_rms_dev) + ',';
      out += opt(r.run.phi_recovery_time) + ',';
    } else {
      out += ",,,,,,";
    }
    // commas in error messages would break the row
    std::string err = r.error;
    std::replace(err.begin(), err.end(), ',', ';');
    out += err;
    out += '\n';
  }
  return out;
}

SweepReport run_sweep(const std::vector<SweepEntry>& entries, const std::string& out_dir,
                      unsigned workers) {
  {
    std::set<std::string> seen;
    for (const auto& e : entries)
      if (!seen.insert(e.name).second)
        throw ConfigError("run_sweep: duplicate scenario name '" + e.name + "'");
  }

  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());

  std::vector<SweepRow> rows(entries.size());
  std::atomic<size_t> next{0};
  auto worker = [&]() {
    while (true) {
      const size_t i = next.fetch_add(1);
      if (i >= entries.size()) return;
      SweepRow& row = rows[i];
      row.name = entries[i].name;
      try {
        const auto res = run_scenario(entries[i].cfg);
        row.l2_gain = res.l2_gain;
        row.run = res.run;
        row.ok = true;
        if (!out_dir.empty()) write_outputs(entries[i].cfg, res, out_dir + "/" + entries[i].name);
      } catch (const std::exception& ex) {
        row.ok = false;
        row.error = ex.what();
      }
    }
  };

  std::vector<std::thread> pool;
  const unsigned count = std::min<unsigned>(workers, static_cast<unsigned>(entries.size()));
  for (unsigned i = 0; i + 1 < count; ++i) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  SweepReport report;
  report.rows = std::move(rows);
  std::sort(report.rows.begin(), report.rows.end(),
            [](const SweepRow& a, const SweepRow& b) { return a.name < b.name; });
  return report;
}

}  // namespace faultsim::harness
