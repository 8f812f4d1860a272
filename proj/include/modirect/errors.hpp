#pragma once

#include <stdexcept>

namespace modirect {

/// Bad arguments: dimension mismatches, out-of-range indices, degenerate bounds.
class InvalidInput : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A linear-algebra step failed (matrix not positive definite, solver did not converge).
class NumericalFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Operation called on an object in a state that cannot serve it (empty archive, empty partition).
class InvalidState : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

}  // namespace modirect
