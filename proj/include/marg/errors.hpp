#pragma once

#include <stdexcept>

namespace marg {

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct FormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CapacityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Invalid scene geometry, out-of-range parameters, malformed configs.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace marg
