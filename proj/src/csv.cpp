#include "faultsim/harness/csv.hpp"

#include <fstream>
#include <sstream>

#include "faultsim/errors.hpp"
#include "faultsim/harness/numfmt.hpp"

namespace faultsim::harness {

std::string csv_to_string(const Trajectory& traj) {
  std::string out;
  out.reserve(static_cast<size_t>(traj.rows()) * static_cast<size_t>(traj.cols()) * 12 + 256);
  out += "# schema: ";
  out += kTrajectorySchema;
  out += '\n';
  for (Eigen::Index c = 0; c < traj.cols(); ++c) {
    if (c) out += ',';
    out += traj.columns()[static_cast<size_t>(c)];
  }
  out += '\n';
  for (Eigen::Index r = 0; r < traj.rows(); ++r) {
    for (Eigen::Index c = 0; c < traj.cols(); ++c) {
      if (c) out += ',';
      out += format_double(traj.cell(r, c));
    }
    out += '\n';
  }
  return out;
}

void emit_csv(const Trajectory& traj, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << csv_to_string(traj);
  if (!out) throw IoError("write failed: " + path);
}

Trajectory import_csv_string(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  auto split_fields = [](const std::string& s) {
    std::vector<std::string> fields;
    size_t start = 0;
    while (true) {
      const size_t comma = s.find(',', start);
      fields.push_back(s.substr(start, comma == std::string::npos ? comma : comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    return fields;
  };

  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    auto fields = split_fields(line);
    if (header.empty()) {
      header = std::move(fields);
      continue;
    }
    if (fields.size() != header.size())
      throw IoError("csv line " + std::to_string(lineno) + ": field count mismatch");
    std::vector<double> row(fields.size());
    for (size_t i = 0; i < fields.size(); ++i) {
      try {
        row[i] = parse_double(fields[i]);
      } catch (const ConfigError& e) {
        throw IoError("csv line " + std::to_string(lineno) + ": " + e.what());
      }
    }
    rows.push_back(std::move(row));
  }
  if (header.empty()) throw IoError("csv: missing header row");

  Trajectory traj(header, static_cast<Eigen::Index>(rows.size()));
  for (size_t r = 0; r < rows.size(); ++r)
    for (size_t c = 0; c < header.size(); ++c)
      traj.cell(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
  return traj;
}

Trajectory import_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return import_csv_string(ss.str());
}

}  // namespace faultsim::harness
