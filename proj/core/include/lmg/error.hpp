#pragma once

#include <stdexcept>
#include <string>

namespace lmg {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A parameter is outside the range an operation accepts.
class InvalidParameter : public Error {
 public:
  using Error::Error;
};

/// A phase-space point lies outside the unit disk |alpha|^2 <= 1 (or on its
/// boundary where derivatives are singular).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A direction cannot be read off a zero-length vector.
class DegenerateDirection : public Error {
 public:
  using Error::Error;
};

/// Numerical integration drifted past its accuracy guard.
class AccuracyError : public Error {
 public:
  using Error::Error;
};

/// The closed-form effective Hamiltonian exists only for m = 0.
class UnsupportedResonance : public Error {
 public:
  using Error::Error;
};

}  // namespace lmg
