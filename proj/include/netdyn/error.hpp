#pragma once

#include <stdexcept>
#include <string>

namespace netdyn {

// Two families, mapped to CLI exit codes 1 and 2 respectively.

/// Bad input, bad configuration, or misaligned data. Detected before any
/// numerical work starts.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Failure during computation (simulation, estimation, I/O after validation).
class ComputeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ConfigError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class DegenerateInputError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

/// A raw country string that the dictionary cannot map under the error policy.
class UnknownNameError : public ValidationError {
public:
    explicit UnknownNameError(std::string raw)
        : ValidationError("unmatched affiliation name: \"" + raw + "\""), raw_(std::move(raw)) {}
    const std::string& raw() const noexcept { return raw_; }

private:
    std::string raw_;
};

class IoError : public ComputeError {
public:
    IoError(const std::string& path, const std::string& what)
        : ComputeError(path + ": " + what), path_(path) {}
    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

class NumericalError : public ComputeError {
public:
    using ComputeError::ComputeError;
};

class RunawayRateError : public ComputeError {
public:
    using ComputeError::ComputeError;
};

class SingularDerivativeError : public ComputeError {
public:
    using ComputeError::ComputeError;
};

class DivergenceError : public ComputeError {
public:
    using ComputeError::ComputeError;
};

class InsufficientDrawsError : public ComputeError {
public:
    using ComputeError::ComputeError;
};

class UndefinedPValueError : public ComputeError {
public:
    using ComputeError::ComputeError;
};

}  // namespace netdyn
