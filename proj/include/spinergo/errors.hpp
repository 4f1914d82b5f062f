#pragma once

#include <stdexcept>
#include <string>

namespace spinergo {

/// Lattice dimensions outside the supported range.
class InvalidGeometry : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Hilbert space larger than the dense representation supports.
class CapacityError : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// Model parameter that is non-finite or out of domain.
class InvalidParameter : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Malformed argument to a state operation (dimensions, site indices, times).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Density matrix that violates Hermiticity, normalization or positivity.
class InvalidState : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Eigensolver failure.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Time series too short for the requested averaging window.
class InvalidWindow : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Configuration problem; line() is 0 for semantic errors not tied to a line.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& what, int line = 0)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

}  // namespace spinergo
