#pragma once

#include <Eigen/Dense>
#include <memory>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "faultsim/errors.hpp"

namespace faultsim::core {

// Immutable name -> index map shared by every StateVector of one system.
class StateLayout {
 public:
  explicit StateLayout(std::vector<std::string> names) : names_(std::move(names)) {
    for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(names_.size()); ++i) {
      auto [it, inserted] = index_.emplace(names_[static_cast<size_t>(i)], i);
      if (!inserted) throw ConfigError("duplicate state name: " + names_[static_cast<size_t>(i)]);
    }
  }

  Eigen::Index size() const { return static_cast<Eigen::Index>(names_.size()); }

  Eigen::Index index(std::string_view name) const {
    auto it = index_.find(std::string(name));
    if (it == index_.end()) throw ConfigError("unknown state name: " + std::string(name));
    return it->second;
  }

  const std::string& name(Eigen::Index i) const { return names_.at(static_cast<size_t>(i)); }
  const std::vector<std::string>& names() const { return names_; }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, Eigen::Index> index_;
};

// Flat state with a stable index map. Length fixed at construction.
class StateVector {
 public:
  StateVector(std::shared_ptr<const StateLayout> layout, Eigen::VectorXd values)
      : layout_(std::move(layout)), values_(std::move(values)) {
    if (!layout_) throw ConfigError("StateVector: null layout");
    if (values_.size() != layout_->size())
      throw ConfigError("StateVector: size mismatch with layout");
  }

  static StateVector zero(std::shared_ptr<const StateLayout> layout) {
    Eigen::Index n = layout->size();
    return StateVector(std::move(layout), Eigen::VectorXd::Zero(n));
  }

  Eigen::Index size() const { return values_.size(); }
  const StateLayout& layout() const { return *layout_; }
  std::shared_ptr<const StateLayout> layout_ptr() const { return layout_; }

  double operator[](Eigen::Index i) const { return values_[i]; }
  double& operator[](Eigen::Index i) { return values_[i]; }
  double at(std::string_view name) const { return values_[layout_->index(name)]; }
  double& at(std::string_view name) { return values_[layout_->index(name)]; }

  const Eigen::VectorXd& values() const { return values_; }
  Eigen::VectorXd& values() { return values_; }

  // Index of the first non-finite entry, or -1 if all entries are finite.
  Eigen::Index first_nonfinite() const {
    for (Eigen::Index i = 0; i < values_.size(); ++i)
      if (!std::isfinite(values_[i])) return i;
    return -1;
  }

 private:
  std::shared_ptr<const StateLayout> layout_;
  Eigen::VectorXd values_;
};

}  // namespace faultsim::core
