#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace catmap {

// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input has the wrong shape (odd dimension, non-square, mismatched sizes).
class DimensionError : public Error {
 public:
  using Error::Error;
};

// Integer matrix that should be symplectic is not.
class NotSymplecticError : public Error {
 public:
  using Error::Error;
};

// ker(I - g) is nontrivial, or a modulus matrix is singular.
class DegenerateMapError : public Error {
 public:
  using Error::Error;
};

class PeriodNotFoundError : public Error {
 public:
  using Error::Error;
};

// A construction path does not apply to the given (g, N).
class NotApplicableError : public Error {
 public:
  using Error::Error;
};

// Invalid scalar parameter (N < 1, delta <= 0, Im tau <= 0, ...).
class ParameterError : public Error {
 public:
  using Error::Error;
};

// A numerical certificate was violated. `index` names the offending item
// (eigenpair, sample, ...) when there is one.
class NumericalFailureError : public Error {
 public:
  NumericalFailureError(const std::string& what, std::size_t index)
      : Error(what), index_(index) {}
  explicit NumericalFailureError(const std::string& what)
      : Error(what), index_(static_cast<std::size_t>(-1)) {}

  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

// Two constructions that must agree do not: signals a convention bug.
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

}  // namespace catmap
