#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace nongauss {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid argument, out-of-range parameter or unsupported input shape.
class ArgumentError : public Error {
public:
    using Error::Error;
};

/// Input of the wrong state class (e.g. a bound's precondition is not met).
class PreconditionError : public ArgumentError {
public:
    using ArgumentError::ArgumentError;
};

/// Operation not defined for this number of modes.
class UnsupportedError : public ArgumentError {
public:
    using ArgumentError::ArgumentError;
};

/// Numerically invalid data: negative eigenvalues beyond tolerance, unphysical
/// covariance matrices, degenerate post-selection and similar.
class NumericalError : public Error {
public:
    using Error::Error;
};

/// Phase-space integration grid too small for the requested accuracy.
class QuadratureError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// Fock-space truncation is too tight for the requested operation.
class TruncationError : public Error {
public:
    TruncationError(const std::string& what, std::size_t suggested_cutoff = 0)
        : Error(what), suggested_cutoff_(suggested_cutoff) {}

    /// Smallest cutoff expected to pass, 0 when unknown.
    std::size_t suggested_cutoff() const noexcept { return suggested_cutoff_; }

private:
    std::size_t suggested_cutoff_;
};

/// Requested Hilbert space exceeds the configured maximum dimension.
class ResourceError : public Error {
public:
    using Error::Error;
};

}  // namespace nongauss
