#pragma once

#include <stdexcept>

namespace growthlab {

// Bad or inconsistent run configuration. The CLI maps this to exit code 1.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Filesystem trouble: unreadable config, unwritable output, missing checkpoint.
// The CLI maps this to exit code 3.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace growthlab
