#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace slspec {

/// Argument outside the domain an operation is defined on (x ∉ [0,π], bad partition, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Raised for λ = 0, where √λ-scaled formulas are singular.
class SingularArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class IntegrationBlowup : public std::runtime_error {
 public:
  IntegrationBlowup(const std::string& what, double location)
      : std::runtime_error(what), location_(location) {}
  double location() const noexcept { return location_; }

 private:
  double location_;
};

/// Root search exhausted its budget. Carries the best iterate seen.
class NonConvergence : public std::runtime_error {
 public:
  NonConvergence(const std::string& what, std::complex<double> best_sqrt_lambda, double best_residual)
      : std::runtime_error(what), best_(best_sqrt_lambda), residual_(best_residual) {}
  std::complex<double> best_sqrt_lambda() const noexcept { return best_; }
  double best_residual() const noexcept { return residual_; }

 private:
  std::complex<double> best_;
  double residual_;
};

/// A converged root belongs to a different eigenvalue index than requested.
class IndexingError : public std::runtime_error {
 public:
  IndexingError(const std::string& what, int found_index)
      : std::runtime_error(what), found_(found_index) {}
  int found_index() const noexcept { return found_; }

 private:
  int found_;
};

/// Malformed potential file or configuration.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace slspec
