#pragma once

#include <stdexcept>
#include <string>

namespace rdlab {

/// Invalid input: bad parameters, violated preconditions, inconsistent
/// configuration records. The CLI maps this to exit code 2.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Argument outside the domain of a function (e.g. f(u) for u < 0).
class DomainError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

/// A nonlinearity fails the structural sign/integral conditions required
/// by an operation (no positive root of V, missing bistable mass, ...).
class StructuralError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

/// Requested a critical exponent outside its range of validity.
class UndefinedExponent : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

/// The solver could not produce a trustworthy answer: NaN/overflow,
/// failed bracketing, non-monotone classification. Exit code 3.
class NumericalAbort : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace rdlab
