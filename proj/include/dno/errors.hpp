#pragma once

#include <stdexcept>
#include <string>

namespace dno {

/// Input outside a function's mathematical domain (non-finite argument, h <= 0, ...).
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

/// Vector/matrix dimensions do not chain.
struct ShapeError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Request exceeds what a component supports (derivative order, univariate-only op).
struct CapabilityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A construction failed its internal grid verification.
struct ConstructionError : std::runtime_error {
  ConstructionError(const std::string& what, double measured)
      : std::runtime_error(what), measured_error(measured) {}
  double measured_error;
};

/// Requested accuracy is below the double/double-double conditioning floor.
struct ConditioningError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A sampler or input file failed; message identifies the offending point.
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Invalid run configuration (empty grid, missing metadata, bad selector).
struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

}  // namespace dno
