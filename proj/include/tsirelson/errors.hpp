#pragma once

#include <stdexcept>
#include <string>

namespace tsirelson {

// Malformed literal or descriptor.
struct ParseError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Well-formed input violating a parameter constraint (k >= 2, p >= 1, ...).
struct ConstraintError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct PreconditionError : std::logic_error {
    using std::logic_error::logic_error;
};

// A computation would exceed a configured size budget.
struct ResourceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A mechanical check of a constructed object failed.
struct VerificationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace tsirelson
