#pragma once

#include <stdexcept>
#include <string>

namespace stable_exit {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// (alpha, rho) pair outside the admissible band of strictly stable laws.
class AdmissibilityError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// The law is valid but no formula covers it for the requested quantity.
class UnsupportedRegime : public DomainError {
 public:
  using DomainError::DomainError;
};

/// A quadrature or series did not reach its tolerance. Carries the best
/// estimate obtained before giving up.
class NonConvergence : public Error {
 public:
  NonConvergence(const std::string& what, double best_estimate, double abs_err)
      : Error(what), best_estimate_(best_estimate), abs_err_(abs_err) {}

  double best_estimate() const noexcept { return best_estimate_; }
  double abs_err() const noexcept { return abs_err_; }

 private:
  double best_estimate_;
  double abs_err_;
};

}  // namespace stable_exit
