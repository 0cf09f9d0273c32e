#pragma once

#include <stdexcept>
#include <string>

namespace hrkl {

/// Base class for every error raised by the library. `exit_code()` is the
/// process status the command-line front end reports for it.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
    virtual int exit_code() const noexcept { return 1; }
};

class UsageError : public Error {
public:
    using Error::Error;
    int exit_code() const noexcept override { return 2; }
};

/// Input violates a precondition (bad shape, non-monotone timestamps, ...).
class ValidationError : public Error {
public:
    using Error::Error;
    int exit_code() const noexcept override { return 3; }
};

/// Malformed text input. Carries the 1-based line number.
class ParseError : public ValidationError {
public:
    ParseError(const std::string& what, std::size_t line)
        : ValidationError(what + " (line " + std::to_string(line) + ")"), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Corruption sections could not be placed without overlap.
class PlacementError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

/// Non-finite covariance, Cholesky failure after jitter escalation, ...
class NumericError : public Error {
public:
    using Error::Error;
    int exit_code() const noexcept override { return 4; }
};

/// Every optimizer restart failed for one (kernel, series) cell.
class FitError : public NumericError {
public:
    using NumericError::NumericError;
};

/// Too many cells of a BIC sweep failed.
class SweepError : public NumericError {
public:
    using NumericError::NumericError;
};

class IoError : public Error {
public:
    using Error::Error;
    int exit_code() const noexcept override { return 5; }
};

}  // namespace hrkl
