#pragma once

#include <stdexcept>
#include <string>

namespace lhvbell {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A domain precondition was violated (negative squeeze, NaN input, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// The normalizing denominator of a correlation ratio is (statistically) zero.
class DegenerateDenominator : public Error {
 public:
  using Error::Error;
};

/// A requested buffer could not be sized or allocated.
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// Count-rate pairs of different representations were fed to one accumulator.
class RepresentationMismatch : public Error {
 public:
  using Error::Error;
};

}  // namespace lhvbell
