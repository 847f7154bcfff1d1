#pragma once

#include <stdexcept>

namespace flexkrylov {

// Raised when a computation leaves the domain the algorithms are defined on:
// loss of positive definiteness, non-finite values, exhausted subspaces,
// failed factorizations. Invalid user input raises std::invalid_argument.
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace flexkrylov
