#pragma once

#include <stdexcept>
#include <string>

namespace bslip {

// Bad input to a public operation (wrong dimension, out-of-range index, ...).
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A caller broke a precondition that the operation cannot repair.
class ContractViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

// Linear solver failed to reach the requested residual.
class SolverFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Exact subproblem solver refused a patch that exceeds its size budget.
class PatchTooLarge : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Patch cover does not satisfy the cover or strong-overlap property.
class CoverViolation : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// An algorithmic invariant of the SLIP driver failed at runtime.
class InvariantViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

} // namespace bslip
