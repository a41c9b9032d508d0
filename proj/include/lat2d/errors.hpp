#pragma once

#include <stdexcept>
#include <string>

namespace lat2d {

// Every failure raised by the library derives from Error, so callers that only
// care about "something went wrong" can catch a single type.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Index outside a grid.
struct RangeError : Error {
  using Error::Error;
};

// Two operands whose shapes do not fit together.
struct ShapeError : Error {
  using Error::Error;
};

// Input outside the domain of a partial map (splitters, counits, antipodes).
// The coproducts of a 2D coalgebra are partial by construction, so this is an
// expected outcome and not a bug.
struct DomainError : Error {
  using Error::Error;
};

// A symbol without a matrix in the chosen representation.
struct RepresentationError : Error {
  using Error::Error;
};

// Missing or inconsistent example data, invalid user configuration.
struct ConfigError : Error {
  using Error::Error;
};

// A parameter value at which a formula is singular (q = 0, q^2 = 1, ...).
struct ParameterError : Error {
  using Error::Error;
};

// A computation that would exceed a declared size cap.
struct ResourceError : Error {
  using Error::Error;
};

// Degenerate numerical input (e.g. a fit with too few points).
struct NumericalError : Error {
  using Error::Error;
};

}  // namespace lat2d
