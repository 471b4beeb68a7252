#pragma once

#include <stdexcept>
#include <string>

namespace chaoscope {

// Base for every error raised by the library. The CLI maps subclasses to
// exit codes: ConfigError/PreconditionError are usage errors, the
// evaluation family (DomainError, SingularMoment, Divergence) are runtime.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

class EvaluationError : public Error {
 public:
  using Error::Error;
};

// Parameter or moment outside the family's declared domain.
class DomainError : public EvaluationError {
 public:
  using EvaluationError::EvaluationError;
};

// Moment inside the domain where the evaluator is undefined (x = 0 for
// log_sine, x = 1 for sin_2pia, ln of a non-positive value, ...).
class SingularMoment : public EvaluationError {
 public:
  using EvaluationError::EvaluationError;
};

// Iterated values left the finite range.
class Divergence : public EvaluationError {
 public:
  using EvaluationError::EvaluationError;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace chaoscope
