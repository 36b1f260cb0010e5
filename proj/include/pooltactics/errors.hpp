#pragma once

#include <stdexcept>

namespace pooltactics {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed scenario or configuration input: unknown fields, out-of-range
/// values, inconsistent pool/branch references. CLI exit code 2.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Reference to a period or pool that does not exist in a schedule.
class ScheduleBoundsError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

/// Argument outside an operation's domain (non-positive duration, share
/// outside [0,1], zero trials, ...). CLI exit code 2.
class DomainError : public Error {
public:
    using Error::Error;
};

/// A scenario whose network cannot mine at all (zero total hash-rate).
/// CLI exit code 4.
class DegenerateNetworkError : public Error {
public:
    using Error::Error;
};

/// File system failure. CLI exit code 3.
class IoError : public Error {
public:
    using Error::Error;
};

} // namespace pooltactics
