#pragma once

#include <stdexcept>
#include <string>

namespace dunkl {

/// Precondition violated by the caller (bad exponent, t <= 0, X == Y, ...).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The requested tensor grid is larger than the configured evaluation cap.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A non-finite value appeared while evaluating an integrand.
class EvaluationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A truncated or inverted integral did not reach its accuracy target.
class AccuracyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace dunkl
