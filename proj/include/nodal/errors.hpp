#pragma once

#include <stdexcept>
#include <string>

namespace nodal {

// Caller broke a documented precondition (bad dimension, eta too large, ...).
struct PreconditionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// A numerical routine could not reach its accuracy target.
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace nodal
