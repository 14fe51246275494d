#pragma once

#include <stdexcept>
#include <string>

namespace rrg {

// Argument or state violates an operation's precondition.
struct PreconditionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Instance exceeds an enumeration or sampling budget.
struct BudgetError : std::length_error {
    using std::length_error::length_error;
};

// The graph class G_{d,A} is empty, so probabilities on it are undefined.
struct EmptyClassError : std::domain_error {
    using std::domain_error::domain_error;
};

// A denominator fell below its guard, or a series failed to converge.
struct DegenerateError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace rrg
