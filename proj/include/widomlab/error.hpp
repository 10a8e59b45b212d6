#pragma once

#include <stdexcept>
#include <string>

namespace widomlab {

// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or inconsistent input (reversed endpoints, overlapping bands, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Argument outside the domain of an operation (point inside a band, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Quadrature, solver, or search failed to reach the requested accuracy.
class NumericalError : public Error {
 public:
  using Error::Error;
};

// An inductive construction could not complete a step.
class ConstructionError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace widomlab
