#pragma once

#include <stdexcept>
#include <string>

namespace metriq {

// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Operand shapes disagree.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// An input violates a documented precondition (not hermitian, index out of
// range, parameter outside its validity region, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// A numerical procedure could not deliver a trustworthy answer: singular
// metric, solver non-convergence, defective eigenbasis, exponent overflow.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace metriq
