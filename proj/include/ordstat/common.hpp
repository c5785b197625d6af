#pragma once

#include <stdexcept>
#include <string>

namespace ordstat {

inline constexpr const char* kVersion = "0.1.0";

// Inconsistent component wiring (integrator kind vs dimension, enumeration
// guard, wrong model instance for a check), as opposed to bad call arguments.
class config_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ordstat
