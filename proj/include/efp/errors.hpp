#pragma once

#include <stdexcept>

namespace efp {

// Malformed instance/report input.
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Instance regime does not match the selected auction.
struct RegimeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Exhaustive-search size cap exceeded.
struct SizeCapError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A run-time invariant the algorithm guarantees by construction failed;
// signals an implementation bug, never bad input.
struct InvariantError : std::logic_error {
    using std::logic_error::logic_error;
};

}  // namespace efp
