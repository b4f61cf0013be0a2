// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dirsim {

/// Argument outside the mathematical domain of an operation (non-positive
/// power, coincident points, zero distance, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Configuration text or values that cannot be turned into a valid setup.
/// `line()` is 0 when the error is not tied to a specific input line.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what, std::size_t line = 0)
      : std::runtime_error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// A scenario or simulation request that is structurally impossible
/// (unknown radio, half-duplex violation, missing antenna block, ...).
class ScenarioError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace dirsim
