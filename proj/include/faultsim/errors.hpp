#pragma once

#include <stdexcept>
#include <string>

namespace faultsim {

// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Invalid configuration value or invariant violation (CLI exit code 2).
struct ConfigError : Error {
  using Error::Error;
};

// A gain sufficient condition failed while running in strict mode (exit code 3).
struct GainCheckError : Error {
  using Error::Error;
};

// Numerical integration produced a non-finite value or hit a model
// singularity (exit code 4). Carries the time and the offending state index
// when known (index = -1 otherwise).
struct IntegrationError : Error {
  IntegrationError(const std::string& what, double t_fail, long index_fail)
      : Error(what), t(t_fail), index(index_fail) {}
  double t;
  long index;
};

// z <= 0 in the rotor aerodynamic terms.
struct SingularityError : Error {
  using Error::Error;
};

// Iterative numeric routine failed to converge.
struct NumericalError : Error {
  using Error::Error;
};

// A caller violated a documented pre-condition (e.g. indicators outside
// [0,1], allocation off the simplex).
struct ContractError : Error {
  using Error::Error;
};

// File / stream problems, with the path in the message.
struct IoError : Error {
  using Error::Error;
};

}  // namespace faultsim
