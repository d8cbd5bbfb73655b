#pragma once

#include <stdexcept>
#include <string>

namespace hirz {

// Mixed coefficient domains (rational vs complex, or different precisions).
struct DomainError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// A documented precondition of an operation does not hold.
struct PreconditionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// A polynomial division that must be exact left a remainder.
struct InexactDivision : std::logic_error {
    using std::logic_error::logic_error;
};

// Evaluation too close to a pole of an elliptic or genus function.
struct PoleError : std::domain_error {
    using std::domain_error::domain_error;
};

struct LatticeError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Local branch evaluator asked for a point outside its disc.
struct OutsideReliabilityRadius : std::domain_error {
    using std::domain_error::domain_error;
};

// Numeric monodromy ratios disagree between sample points.
struct MonodromyInconsistency : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace hirz
