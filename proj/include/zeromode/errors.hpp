#pragma once

#include <stdexcept>
#include <string>

namespace zeromode {

/// A constructor or operation received parameters outside its domain.
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A special function was asked for a value it cannot produce (non-finite
/// argument, divergent integral).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Evaluating a potential failed at a specific position.
class EvaluationError : public std::runtime_error {
 public:
  EvaluationError(const std::string& what, double x)
      : std::runtime_error(what + " (at x = " + std::to_string(x) + ")"), x_(x) {}

  double x() const noexcept { return x_; }

 private:
  double x_;
};

/// Numerical integration of the Dirac system broke down.
class IntegrationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace zeromode
