#pragma once

#include <stdexcept>
#include <string>

namespace c3rotor {

// Bad input: malformed species, truncation, tolerance, coupling kind, ...
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A solver ran out of iterations, lost a branch, or cannot reach the
// requested tolerance in the active numeric field.
class NumericalFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace c3rotor
