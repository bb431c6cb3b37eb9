#pragma once

/// @file errors.hpp
/// Exception hierarchy shared by all modules.

#include <stdexcept>
#include <string>

namespace arcs {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Argument outside the admissible domain of a function.
struct DomainError : Error {
    using Error::Error;
};

/// A sensitivity tail integral does not converge (e.g. power exponent k <= 1).
struct DivergentTail : Error {
    using Error::Error;
};

/// Operation not defined for this sensitivity family.
struct Unsupported : Error {
    using Error::Error;
};

/// Repulsion strength beta fails the structural feasibility inequality.
struct BetaInfeasible : Error {
    using Error::Error;
};

/// Threshold denominator nonpositive: damping parameter outside its interval.
struct DenominatorNonpositive : Error {
    using Error::Error;
};

/// Structural discriminant came out negative where it must not.
struct NegativeDiscriminant : Error {
    using Error::Error;
};

/// Witness grid search exhausted without a feasible candidate.
struct NotFound : Error {
    using Error::Error;
};

/// Certification precondition fails (alpha below the feasibility threshold).
struct Infeasible : Error {
    using Error::Error;
};

/// Iterative linear solve failed to reach the residual tolerance.
struct LinearSolveDiverged : Error {
    using Error::Error;
};

/// Configuration text could not be parsed; message carries the line number.
struct ParseError : Error {
    using Error::Error;
};

/// Parsed configuration value violates a constraint; message names the field.
struct ValidationError : Error {
    using Error::Error;
};

/// Not enough samples for a statistic to be meaningful.
struct InsufficientSamples : Error {
    using Error::Error;
};

} // namespace arcs
