#pragma once

#include <stdexcept>
#include <string>

namespace su11 {

/// Base class for all domain errors raised by this library.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Normal/antinormal factorization denominator vanished.
struct DegenerateDecomposition : Error {
    using Error::Error;
};

/// Shared denominator of the reordering factors vanished.
struct CompositionSingularity : Error {
    using Error::Error;
};

/// Group element sits on the principal-logarithm cut; the exponential
/// parameters are not uniquely recoverable.
struct BranchAmbiguity : Error {
    using Error::Error;
};

/// Matrix exponential input norm too large for a reliable result.
struct OverflowError : Error {
    using Error::Error;
};

/// Time integrator failed to reach the requested step-halving tolerance.
struct StepSizeFailure : Error {
    using Error::Error;
};

/// Evolution coefficient matrix does not satisfy its inverse contract.
struct SingularTMatrix : Error {
    using Error::Error;
};

/// Truncated-space comparison failed the cutoff-doubling discipline.
struct CutoffTooSmall : Error {
    using Error::Error;
};

/// Richardson levels of a numerical derivative disagree.
struct DifferentiationUnstable : Error {
    using Error::Error;
};

/// Doubling the quadrature order moved the integral beyond tolerance.
struct QuadratureNotConverged : Error {
    using Error::Error;
};

/// Gaussian quadratic form is not positive definite.
struct PositivityViolation : Error {
    using Error::Error;
};

/// A quantity left its mathematically guaranteed range; signals an
/// upstream bug rather than a user error.
struct RangeViolation : Error {
    using Error::Error;
};

/// Invalid run configuration (CLI layer).
struct ConfigError : Error {
    using Error::Error;
};

}  // namespace su11
