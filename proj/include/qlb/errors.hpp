#pragma once

#include <stdexcept>
#include <string>

namespace qlb {

// Configuration problems (bad keys, incompatible grids); CLI exit code 2.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Numeric-accuracy failures (quadrature non-convergence, sampling caps);
// CLI exit code 3.
struct NumericError : std::runtime_error {
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace qlb
