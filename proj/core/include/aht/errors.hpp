#pragma once

#include <stdexcept>
#include <string>

namespace aht {

/// Base class for every error raised by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Grid sizing rejected (non power-of-two, too small, stride mismatch).
struct SizingError : Error {
    using Error::Error;
};

/// Elliptic solve is not solvable as posed (nonzero-mean source on the torus).
struct SolvabilityError : Error {
    using Error::Error;
};

/// An operation's mathematical hypothesis is violated (e.g. non-solenoidal
/// velocity handed to an operator that assumes div u = 0).
struct HypothesisError : Error {
    using Error::Error;
};

/// Non-finite values appeared during time evolution.
struct DivergenceError : Error {
    DivergenceError(const std::string& what, double time)
        : Error(what), t(time) {}
    double t;
};

/// Ratio diagnostics with a vanishing denominator.
struct UndefinedRatioError : Error {
    using Error::Error;
};

/// Problem size exceeds a documented cost guard.
struct GuardError : Error {
    using Error::Error;
};

/// Invalid experiment configuration.
struct ConfigError : Error {
    using Error::Error;
};

/// Filesystem / serialization failure.
struct IoError : Error {
    using Error::Error;
};

}  // namespace aht
