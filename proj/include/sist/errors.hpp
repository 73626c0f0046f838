#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace sist {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A shape or parameter violates its invariants.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Rasterization produced no interior points, or a region is empty.
class DegenerateGeometryError : public Error {
 public:
  using Error::Error;
};

/// Not enough levels for the requested statistic.
class InsufficientLevelsError : public Error {
 public:
  using Error::Error;
};

/// Accuracy target cannot be met at the current resolution or truncation.
class RefinementNeededError : public Error {
 public:
  using Error::Error;
};

/// Iterative eigensolver hit its iteration cap; carries the last residuals.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, std::vector<double> residuals)
      : Error(what), residuals_(std::move(residuals)) {}

  const std::vector<double>& residuals() const noexcept { return residuals_; }

 private:
  std::vector<double> residuals_;
};

/// Malformed configuration (JSON or command line).
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace sist
