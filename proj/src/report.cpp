#include "faultsim/harness/report.hpp"

#include <fstream>

#include "faultsim/errors.hpp"
#include "faultsim/harness/numfmt.hpp"

namespace faultsim::harness {

void Report::add(const std::string& key, double value) { add(key, format_double(value)); }

std::string Report::to_string() const {
  std::string out;
  for (const auto& [k, v] : rows_) {
    out += k;
    out += " = ";
    out += v;
    out += '\n';
  }
  return out;
}

void Report::write(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << to_string();
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace faultsim::harness
