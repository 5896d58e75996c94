#pragma once

#include <stdexcept>
#include <string>

namespace morse {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operand shapes do not fit the operation (including non-square inputs).
class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// A documented precondition of an operation does not hold.
class PreconditionViolation : public Error {
 public:
  using Error::Error;
};

/// Two consecutive differentials do not compose to zero.
class BoundaryViolation : public Error {
 public:
  using Error::Error;
};

/// The paired block of a reordered boundary matrix is not unit lower triangular.
class TriangularityViolation : public Error {
 public:
  using Error::Error;
};

class NotNilpotent : public Error {
 public:
  using Error::Error;
};

/// A reduction could not be split into the A (+) B (+) C' pattern.
class DecompositionFailure : public Error {
 public:
  using Error::Error;
};

/// A supplied pivot block inverse is not a two-sided inverse.
class NotInvertible : public Error {
 public:
  using Error::Error;
};

/// Malformed matrix or image input.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace morse
