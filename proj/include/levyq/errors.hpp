#pragma once

#include <stdexcept>
#include <string>

namespace levyq {

/// Bad input: out-of-domain arguments, malformed configs, unsupported cases.
/// The CLI maps this family to exit status 2.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class DomainError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// Requested phase count exceeds the configured term-enumeration cap.
class CapacityError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// Equal rates and other degenerate cases that need a limiting argument.
class UnsupportedCaseError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// Stationary quantities requested for a model without negative mean drift.
class StabilityError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// A computation failed to converge or hit a numerical pole.
/// The CLI maps this family to exit status 3.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A rate coincides with an exponent value (q = phi(.) or q = Phi(beta)).
class SingularParameterError : public NumericError {
 public:
  using NumericError::NumericError;
};

}  // namespace levyq
