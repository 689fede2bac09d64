#pragma once

#include <stdexcept>
#include <string>

namespace anelastic {

/// Base class for all library errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Configuration rejected before any numerics ran (CLI exit code 2).
struct ConfigInvalid : Error {
    using Error::Error;
};

/// Base for failures detected during numerical work (CLI exit code 3).
struct NumericalError : Error {
    using Error::Error;
};

/// The density blend interval produced a non-monotone profile.
struct BlendNotMonotone : NumericalError {
    using NumericalError::NumericalError;
};

/// Odd-symmetric extension requested for data that is nonzero at z=0.
struct OddParityNonzeroAtOrigin : NumericalError {
    using NumericalError::NumericalError;
};

/// Grid cannot represent the requested band exactly.
struct GridTooCoarse : NumericalError {
    using NumericalError::NumericalError;
};

/// Linear system assembly or factorization failed (e.g. vanishing density).
struct SingularSystem : NumericalError {
    using NumericalError::NumericalError;
};

/// Pressure right-hand side has a nonzero mean component.
struct IncompatibleRHS : NumericalError {
    using NumericalError::NumericalError;
};

/// State norm exceeded the runaway threshold during time stepping.
struct BlowupDetected : NumericalError {
    using NumericalError::NumericalError;
};

/// Hardy-ratio denominator vanished or the exponent sits in the excluded band.
struct DegenerateDenominator : NumericalError {
    using NumericalError::NumericalError;
};

/// Sweep epsilon is below what the resolution can support.
struct ResolutionError : NumericalError {
    using NumericalError::NumericalError;
};

/// Sweep initial data support is too wide for the largest epsilon.
struct SupportTooWide : NumericalError {
    using NumericalError::NumericalError;
};

}  // namespace anelastic
