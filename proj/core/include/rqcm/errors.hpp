#pragma once

#include <stdexcept>
#include <string>

namespace rqcm {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A dense object or sector basis would exceed a configured size cap.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A numerical consistency check failed (rank, hermiticity, orthonormality, ...).
class ToleranceError : public Error {
 public:
  using Error::Error;
};

/// An argument violates an operation's precondition.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A vector supplied as a fixed point of the moment operator is not one.
class DeflationError : public Error {
 public:
  using Error::Error;
};

/// The iterative eigensolver did not reach the requested residual.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// Too few usable depths survived the signal filter for a decay fit.
class InsufficientSignal : public Error {
 public:
  using Error::Error;
};

/// Malformed or unreadable input file.
class FormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace rqcm
