#pragma once

#include <stdexcept>
#include <string>

namespace dspp {

/// Base for every failure raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input outside the mathematical domain of an operation (pole, violated
/// model invariant, divergent moment condition, branch-cut crossing).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// An iterative scheme did not reach its tolerance. Carries the best
/// estimate and its error bound so callers can decide what to do with it.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double estimate, double error_bound)
      : Error(what), estimate_(estimate), error_bound_(error_bound) {}

  double estimate() const noexcept { return estimate_; }
  double error_bound() const noexcept { return error_bound_; }

 private:
  double estimate_;
  double error_bound_;
};

/// A result was computed but failed an internal accuracy check.
class AccuracyError : public Error {
 public:
  using Error::Error;
};

/// Invalid user-facing configuration (Monte Carlo settings, truncation).
class ConfigurationError : public Error {
 public:
  using Error::Error;
};

}  // namespace dspp
