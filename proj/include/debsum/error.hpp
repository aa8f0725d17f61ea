#pragma once

#include <stdexcept>
#include <string>

namespace debsum {

// Each error class maps to one CLI exit status.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
    virtual int exit_code() const noexcept = 0;
};

class ConfigError : public Error {
public:
    using Error::Error;
    int exit_code() const noexcept override { return 2; }
};

/// Input data that parses but violates a structural invariant (also used for
/// malformed records, with the offending record named in the message).
class ValidationError : public Error {
public:
    using Error::Error;
    int exit_code() const noexcept override { return 3; }
};

/// A numerical routine was asked for something undefined (zero vector,
/// degenerate variance, k > n, ...).
class ComputationError : public Error {
public:
    using Error::Error;
    int exit_code() const noexcept override { return 4; }
};

}  // namespace debsum
