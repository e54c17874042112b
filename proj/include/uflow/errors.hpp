#pragma once

#include <stdexcept>
#include <string>

namespace uflow {

// Invalid or inconsistent user configuration (exit code 2 at the CLI).
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Input data outside the admissible domain (negative density, NaN, cone exit).
struct DomainError : std::runtime_error {
  explicit DomainError(const std::string& msg) : std::runtime_error(msg) {}
};

// Numerical failure at runtime: stiffness, solver breakdown, failed audit
// (exit code 3 at the CLI).
struct NumericError : std::runtime_error {
  explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace uflow
