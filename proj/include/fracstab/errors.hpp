#pragma once

#include <stdexcept>
#include <string>

namespace fracstab {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Invalid user input: parameter ranges, malformed configs, bad exponents.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Requested dimension is outside the supported set.
class UnsupportedDimensionError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// A grid or band limit cannot resolve the requested computation.
class ResolutionError : public Error {
 public:
  using Error::Error;
};

/// A field that must be strictly positive dropped below the positivity floor.
class PositivityError : public Error {
 public:
  using Error::Error;
};

/// Adaptive time step underflowed; the problem is too stiff for the policy.
class StiffnessError : public Error {
 public:
  using Error::Error;
};

/// Derivative-free optimizer exhausted its budget without converging.
class OptimizationError : public Error {
 public:
  OptimizationError(const std::string& what, double bestValue)
      : Error(what), bestValue(bestValue) {}
  double bestValue;  ///< objective at the best iterate found
};

/// A quotient was requested for a field lying (numerically) on the manifold.
class DegenerateQuotientError : public Error {
 public:
  using Error::Error;
};

/// A log-slope fit was requested on non-positive data.
class DegenerateFitError : public Error {
 public:
  using Error::Error;
};

/// File could not be read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace fracstab
