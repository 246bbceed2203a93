#ifndef QSENSE_ERRORS_HPP
#define QSENSE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace qsense {

/// Base class for all qsense domain errors. Malformed input files throw
/// ParseError instead; everything else derives from Error.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Vector or matrix dimensions do not agree (positions vs. function set,
/// coefficient matrix vs. state, ...).
struct DimensionMismatch : Error {
    using Error::Error;
};

/// A sensor sits exactly on a point source, where the field diverges.
struct PositionOnSource : Error {
    using Error::Error;
};

/// The signal row lies in the span of the noise rows; no probe can be
/// sensitive to the signal while staying blind to the noise.
struct SignalIndistinguishable : Error {
    using Error::Error;
};

/// The constrained optimum is zero: every admissible probe is blind to the
/// signal (typically because zero-capacity sites pin the only free direction).
struct DegenerateOptimum : Error {
    using Error::Error;
};

/// Instance exceeds a hard enumeration or qubit-count bound.
struct TooLarge : Error {
    using Error::Error;
};

/// No nonzero integer eigenvalue vector satisfies the noise constraints.
struct Infeasible : Error {
    using Error::Error;
};

/// Amplitudes fail their normalization check.
struct NotNormalized : Error {
    using Error::Error;
};

/// A branch eigenvalue cannot be realized by a static pattern of single-qubit
/// eigenvalues at the given site (non-integer, out of range, or wrong parity).
struct NonIntegerEigenvalue : Error {
    using Error::Error;
};

/// Operation requires an equal two-branch superposition.
struct NotTwoBranch : Error {
    using Error::Error;
};

/// The alternating scenario requires an even number of sensors.
struct OddSiteCount : Error {
    using Error::Error;
};

/// Scenario file could not be parsed or violates the schema.
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace qsense

#endif
