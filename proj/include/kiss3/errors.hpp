#pragma once

#include <stdexcept>

namespace kiss3 {

// Bad arguments or an unmet precondition. CLI maps this to exit code 2.
struct usage_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Documented limitation hit (non-Euclidean gcd, exhausted factor search).
struct unsupported_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A search budget ran out before a complete answer existed. Exit code 3.
struct budget_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Internal consistency failure: indicates a bug, never bad input.
struct invariant_error : std::logic_error {
    using std::logic_error::logic_error;
};

} // namespace kiss3
