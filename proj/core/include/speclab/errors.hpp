#pragma once

#include <stdexcept>
#include <string>

namespace speclab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operand shapes do not fit together (Kraus operators of different size, ...).
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A documented precondition on an argument does not hold.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// A dense eigen/Schur solver failed to converge.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// The leading eigenvalue of a superoperator is (numerically) degenerate,
/// so the invariant state is not unique.
class DegenerateSpectrumError : public Error {
 public:
  using Error::Error;
};

}  // namespace speclab
