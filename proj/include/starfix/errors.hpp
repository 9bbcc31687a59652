#pragma once

#include <stdexcept>
#include <string>

namespace starfix {

// Base of every error thrown by the library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of an operation
// (value outside [0,1], point not in the space, arity mismatch, ...).
struct DomainError : Error {
  using Error::Error;
};

// A map sent a point outside the (tolerance-inflated) box of a grid.
struct MapRangeError : Error {
  using Error::Error;
};

// A system failed validation and cannot be iterated.
struct ValidationError : Error {
  using Error::Error;
};

// Malformed configuration file; the message carries the key path.
struct ConfigError : Error {
  using Error::Error;
};

// An iteration did not settle within its step budget.
struct ConvergenceError : Error {
  using Error::Error;
};

// Oracle instance family exceeds its hard-coded size cap.
struct SizeCapError : Error {
  using Error::Error;
};

}  // namespace starfix
