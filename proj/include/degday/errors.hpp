#pragma once

#include <stdexcept>
#include <string>

namespace degday {

// Model construction rejected the drift matrix: eigenvalues must be distinct
// with strictly negative real part for the process to be stationary.
class StationarityError : public std::runtime_error {
 public:
  explicit StationarityError(const std::string& what) : std::runtime_error(what) {}
};

// Adaptive integration failed to reach the requested tolerance within the
// panel budget.
class QuadratureError : public std::runtime_error {
 public:
  explicit QuadratureError(const std::string& what) : std::runtime_error(what) {}
};

// Malformed or inconsistent user-supplied configuration / input data.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace degday
