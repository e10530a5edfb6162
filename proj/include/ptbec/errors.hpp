#pragma once

#include <stdexcept>
#include <string>

namespace ptbec {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

// numerics
class IntegrationError : public Error {
public:
    using Error::Error;
};
class StepLimitExceeded : public IntegrationError {
public:
    using IntegrationError::IntegrationError;
};
class StepSizeUnderflow : public IntegrationError {
public:
    using IntegrationError::IntegrationError;
};
class NonFiniteDerivative : public IntegrationError {
public:
    using IntegrationError::IntegrationError;
};
class SingularMatrix : public Error {
public:
    using Error::Error;
};
class NoConvergence : public Error {
public:
    using Error::Error;
};
class NonFiniteFunction : public Error {
public:
    using Error::Error;
};
class ConstraintProjectionFailure : public Error {
public:
    using Error::Error;
};
class RefinementLimit : public Error {
public:
    using Error::Error;
};

// few-mode models
class SizeMismatch : public Error {
public:
    using Error::Error;
};
class UnsupportedSize : public Error {
public:
    using Error::Error;
};

// embedding control
class ZeroCoupling : public Error {
public:
    using Error::Error;
};
/// The onsite-energy system can no longer be solved: the reservoir is
/// depleted or the controls diverge. Treated as a physical breakdown.
class ControlSingular : public Error {
public:
    using Error::Error;
};
class DegenerateInput : public Error {
public:
    using Error::Error;
};
class BranchViolation : public Error {
public:
    using Error::Error;
};

// Gaussian few-mode derivation
class NonNormalizable : public Error {
public:
    using Error::Error;
};
class NotPositiveDefinite : public Error {
public:
    using Error::Error;
};
class OutOfRange : public Error {
public:
    using Error::Error;
};

// variational dynamics
class SingularMetric : public Error {
public:
    using Error::Error;
};
class ControlSearchFailed : public Error {
public:
    using Error::Error;
};

// scenario / CLI
class ParseError : public Error {
public:
    ParseError(const std::string& what, int line, int column)
        : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what),
          line_(line),
          column_(column) {}
    int line() const noexcept { return line_; }
    int column() const noexcept { return column_; }

private:
    int line_;
    int column_;
};
class MissingKey : public Error {
public:
    using Error::Error;
};
class UnitError : public Error {
public:
    using Error::Error;
};
class IoError : public Error {
public:
    using Error::Error;
};
class NoOverlap : public Error {
public:
    using Error::Error;
};

}  // namespace ptbec
