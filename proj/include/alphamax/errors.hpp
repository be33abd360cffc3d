#pragma once

#include <stdexcept>
#include <string>

namespace alphamax {

/// Base class for every error thrown by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A pivot fell below the relative threshold in a symmetric solve.
class SingularMatrixError : public Error {
public:
    using Error::Error;
};

/// The sample covariance of the factors is numerically singular.
class SingularFactorCovarianceError : public SingularMatrixError {
public:
    using SingularMatrixError::SingularMatrixError;
};

/// The cross-sectionally demeaned loading Gram matrix is singular.
class SingularBetaGramError : public SingularMatrixError {
public:
    using SingularMatrixError::SingularMatrixError;
};

/// Eigensolver failed to reach the requested residual within its iteration cap.
class NoConvergenceError : public Error {
public:
    NoConvergenceError(const std::string& msg, double attained)
        : Error(msg), attained_residual(attained) {}
    double attained_residual;
};

/// Pooled residual scale is (numerically) zero, so the test transform is undefined.
class DegenerateScaleError : public Error {
public:
    using Error::Error;
};

/// Requested eigenpair count is outside [1, N] or outside the estimator's range.
class InvalidKError : public Error {
public:
    using Error::Error;
};

/// Nominal level outside (0, 1).
class InvalidTauError : public Error {
public:
    using Error::Error;
};

/// Cross-section too small for the Gumbel norming constants.
class NTooSmallError : public Error {
public:
    using Error::Error;
};

/// Rate exponent violates its admissible upper bound for this panel.
class DeltaOutOfRangeError : public Error {
public:
    using Error::Error;
};

/// Replication count too small for the iterated-logarithm threshold.
class BTooSmallForLILError : public Error {
public:
    using Error::Error;
};

/// Degrees of freedom outside the supported range.
class InvalidDfError : public Error {
public:
    using Error::Error;
};

/// Malformed simulation configuration.
class InvalidConfigError : public Error {
public:
    using Error::Error;
};

/// A price column contains a non-positive entry.
class NonPositivePriceError : public Error {
public:
    using Error::Error;
};

/// The risk-free series is absent or incomplete.
class MissingRiskFreeError : public Error {
public:
    using Error::Error;
};

/// Rolling window shorter than the minimum a fit requires.
class WindowTooShortError : public Error {
public:
    using Error::Error;
};

/// Every security was discarded inside a rolling window.
class NoSurvivingSecuritiesError : public Error {
public:
    using Error::Error;
};

/// File could not be read or written.
class IoError : public Error {
public:
    using Error::Error;
};

/// Catch-all for violated preconditions (dimensions, ranges, parse errors).
class InvalidArgumentError : public Error {
public:
    using Error::Error;
};

}  // namespace alphamax
