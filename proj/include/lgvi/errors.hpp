#pragma once

#include <stdexcept>
#include <string>

namespace lgvi {

/// Rotation angle within 1e-9 of pi: the principal logarithm branch is not
/// well defined and callers must decide how to proceed.
struct BranchAmbiguousRotation : std::domain_error {
  explicit BranchAmbiguousRotation(const std::string& what) : std::domain_error(what) {}
};

/// The implicit momentum update failed to converge.
struct ImplicitStepFailure : std::runtime_error {
  double last_residual;
  ImplicitStepFailure(const std::string& what, double residual)
      : std::runtime_error(what), last_residual(residual) {}
};

/// Malformed input file or inconsistent maneuver data.
struct ParseError : std::runtime_error {
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

/// The penalty-method oracle could not reach the feasibility target.
struct OracleInfeasible : std::runtime_error {
  explicit OracleInfeasible(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace lgvi
