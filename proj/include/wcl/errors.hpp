#pragma once

#include <stdexcept>
#include <string>

namespace wcl {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Argument outside the documented exact-arithmetic or validity range.
struct DomainError : Error {
    using Error::Error;
};

/// Enumeration request beyond the configured combinatorial cap.
struct CapacityError : Error {
    using Error::Error;
};

/// Invalid model data (non-Hermitian blocks, non-PSD Gram, ...).
struct ModelError : Error {
    using Error::Error;
};

/// Quadrature failed to reach the requested tolerance.
struct IntegrationError : Error {
    double achieved_tolerance;
    IntegrationError(const std::string& msg, double achieved)
        : Error(msg), achieved_tolerance(achieved) {}
};

/// Series majorant diverges: the contraction condition K*||E11|| < 1 fails.
struct DivergenceError : Error {
    using Error::Error;
};

/// Requested value cannot be produced at the requested precision.
struct PrecisionError : Error {
    using Error::Error;
};

/// Simulated trajectory exceeded its per-step defect budget.
struct InstabilityError : Error {
    using Error::Error;
};

/// Configuration file failed validation.
struct ValidationError : Error {
    using Error::Error;
};

}  // namespace wcl
