// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace lgps {

// Base class for all errors thrown by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Matrix or tensor-slot dimension mismatch.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// Unknown, duplicate, or otherwise invalid slot label.
class LabelError : public Error {
 public:
  using Error::Error;
};

// Malformed or inconsistent input data. The message names the offending field.
class SchemaError : public Error {
 public:
  using Error::Error;
};

// A computed quantity violated a numeric convention, e.g. a probability with
// an imaginary part above tolerance, or an evolution input that is not unitary.
class ConventionError : public Error {
 public:
  using Error::Error;
};

// Conditional statistics requested against an outcome with zero probability
// mass. The message names the outcome entry.
class DegenerateConditioningError : public ConventionError {
 public:
  using ConventionError::ConventionError;
};

// API precondition violated: the call does not apply to the given state or
// model parameters.
class UsageError : public Error {
 public:
  using Error::Error;
};

}  // namespace lgps
