#pragma once

#include <stdexcept>
#include <string>

namespace tangle {

/// A delay law with zero mean. The stationary tip equation then only admits
/// l = 0 and the fluid rescaling collapses.
class DegenerateDelay : public std::invalid_argument {
 public:
  explicit DegenerateDelay(const std::string& what) : std::invalid_argument(what) {}
};

/// Numerical failure inside a solver (non-finite state, bracket failure, ...).
class SolverError : public std::runtime_error {
 public:
  explicit SolverError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace tangle
