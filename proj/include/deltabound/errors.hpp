#pragma once

#include <stdexcept>
#include <string>

namespace deltabound {

/// Base class for every error thrown by the library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation.
struct DomainError : Error {
    using Error::Error;
};

/// Operation asked of a backend that cannot support it (e.g. exact
/// kernels on a generic-bounds model).
struct UnsupportedBackendError : Error {
    using Error::Error;
};

/// Quantity is divergent at the requested point (bare diagonal, zero
/// separation).
struct DivergenceError : Error {
    using Error::Error;
};

/// A series or bound formula was evaluated below its convergence
/// threshold; carries the critical value of nu.
struct ThresholdError : Error {
    double critical_nu;
    ThresholdError(const std::string& msg, double critical)
        : Error(msg), critical_nu(critical) {}
};

/// The generic-bound validity condition is not met; carries the nu
/// required to enter the valid ray.
struct ValidityError : Error {
    double required_nu;
    ValidityError(const std::string& msg, double required)
        : Error(msg), required_nu(required) {}
};

/// Root bracketing failed: no eigenvalue crossing was found.
struct NoCrossingError : Error {
    using Error::Error;
};

/// The principal matrix is singular at the requested energy.
struct AtBoundStateError : Error {
    using Error::Error;
};

/// A certificate does not apply to the configuration it was checked
/// against.
struct IncompatibleCertificateError : Error {
    using Error::Error;
};

/// An input violated a documented precondition of a numeric kernel
/// (e.g. a non-symmetric matrix passed to a symmetric eigensolver).
struct ContractViolationError : Error {
    using Error::Error;
};

}  // namespace deltabound
