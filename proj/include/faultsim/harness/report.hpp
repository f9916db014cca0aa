#pragma once

#include <string>
#include <utility>
#include <vector>

namespace faultsim::harness {

// Flat ordered key = value report.
class Report {
 public:
  void add(const std::string& key, const std::string& value) { rows_.emplace_back(key, value); }
  void add(const std::string& key, const char* value) { rows_.emplace_back(key, value); }
  void add(const std::string& key, double value);
  void add(const std::string& key, bool value) { add(key, std::string(value ? "true" : "false")); }

  const std::vector<std::pair<std::string, std::string>>& rows() const { return rows_; }
  std::string to_string() const;
  void write(const std::string& path) const;

 private:
  std::vector<std::pair<std::string, std::string>> rows_;
};

}  // namespace faultsim::harness
