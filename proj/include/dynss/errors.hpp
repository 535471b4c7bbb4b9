#pragma once

#include <stdexcept>
#include <string>

namespace dynss {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Dimension or tensor-structure mismatch between operands.
struct ShapeError : Error {
    using Error::Error;
};

// Generator handed to matexp (or similar) is not Hermitian within tolerance.
struct HermiticityError : Error {
    using Error::Error;
};

// A stated operation precondition does not hold.
struct PreconditionError : Error {
    using Error::Error;
};

// Group closure exceeded the element budget; likely a continuous group.
struct GroupTooLargeError : Error {
    using Error::Error;
};

// Random generic-element draws failed to separate spectra after retries.
struct DegeneracyError : Error {
    using Error::Error;
};

// Operator lies outside the algebra required by the control scheme.
struct SymmetryError : Error {
    using Error::Error;
};

// Requested Hilbert-space dimension exceeds the supported range.
struct SizeError : Error {
    using Error::Error;
};

// Invalid or unparsable configuration input.
struct ConfigError : Error {
    using Error::Error;
};

}  // namespace dynss
