#pragma once

#include <stdexcept>
#include <string>

namespace gasket {

/// Series evaluated at or below its abscissa of convergence.
class DivergenceError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// An extrapolation or iterative scheme did not settle within tolerance.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Requested size exceeds the configured resource cap.
class ResourceError : public std::length_error {
 public:
  using std::length_error::length_error;
};

}  // namespace gasket
