#pragma once

#include <stdexcept>
#include <string>

namespace squeeze {

/// A point violated the domain of an operation (outside the ball, outside a
/// planar domain, on the boundary, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Inconsistent parameters supplied to a constructor or experiment.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An iterative numerical procedure failed to reach its tolerance.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A report or input file could not be read or written; carries the OS message.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace squeeze
