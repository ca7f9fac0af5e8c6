// Common exception types shared across the library.
#pragma once

#include <stdexcept>
#include <string>

namespace tfe {

/// Raised when a deformation state has det(I + K) <= 0 at an evaluation point.
struct InadmissibleState : std::runtime_error {
  explicit InadmissibleState(const std::string& what) : std::runtime_error(what) {}
};

/// Raised when a linear system is detected to be singular or rank deficient.
struct SingularSystem : std::runtime_error {
  explicit SingularSystem(const std::string& what) : std::runtime_error(what) {}
};

/// Raised when Newton's method exhausts its iteration budget.
struct NonConvergence : std::runtime_error {
  explicit NonConvergence(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace tfe
