#pragma once

#include <stdexcept>
#include <string>

namespace fraclap {

/// Base of every library error; the CLI maps subclasses to exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain (s not in (1/2,1), a >= b, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A requested quantity is infinite (e.g. mass of (0, inf)).
class DivergenceError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Missing metadata or violated caller contract.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Parameters outside the regime where a bound is stated.
class OutOfRegime : public Error {
 public:
  using Error::Error;
};

class UnsupportedDimension : public Error {
 public:
  using Error::Error;
};

/// Some prism of the discrete operator contains no grid point.
class DegenerateStencil : public Error {
 public:
  using Error::Error;
};

/// Tolerance not reached within the evaluation budget.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double estimate, double error)
      : Error(what), estimate_(estimate), error_(error) {}
  double estimate() const { return estimate_; }
  double error_indicator() const { return error_; }

 private:
  double estimate_;
  double error_;
};

}  // namespace fraclap
