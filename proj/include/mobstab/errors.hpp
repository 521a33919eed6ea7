#pragma once

#include <stdexcept>
#include <string>

namespace mobstab {

// Base for all recoverable input/domain errors raised by the library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// normalize(): |ad - bc| below the singularity guard.
struct SingularMatrix : Error {
    using Error::Error;
};

// An operation that needs a parabolic map got something else.
struct NotParabolic : Error {
    using Error::Error;
};

// c = 0: the map fixes infinity, so the finite fixed-point machinery
// (normal form, center line, horocycles) does not apply.
struct FixesInfinity : Error {
    using Error::Error;
};

// The fixed point was passed where a non-fixed point is required.
struct FixedPointInput : Error {
    using Error::Error;
};

struct InvalidEpsilon : Error {
    using Error::Error;
};

struct HorizonTooShort : Error {
    using Error::Error;
};

// Starting point outside the interval a monotone-dynamics routine covers.
struct OutOfBasin : Error {
    using Error::Error;
};

// Iteration cap hit before reaching the requested target interval.
struct NoEscape : Error {
    using Error::Error;
};

// A proved interval-image statement failed numerically. This signals a bug
// in the implementation (or a violated precondition), not a user error.
struct LemmaViolation : std::logic_error {
    using std::logic_error::logic_error;
};

inline void internal_check(bool ok, const std::string& what) {
    if (!ok) throw LemmaViolation("internal check failed: " + what);
}

}  // namespace mobstab
