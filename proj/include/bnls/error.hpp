#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace bnls {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Field with non-finite samples or inconsistent length.
class InvalidFieldError : public Error {
public:
    using Error::Error;
};

/// Inverse of a Fourier multiplier whose symbol is not bounded away from zero.
class SingularOperatorError : public Error {
public:
    using Error::Error;
};

/// Bad parameters or configuration, including exponent-regime violations.
class ConfigError : public Error {
public:
    using Error::Error;
};

class RegimeError : public ConfigError {
public:
    using ConfigError::ConfigError;
};

/// A quotient whose denominator (or numerator, for W_p) vanishes.
class UndefinedQuotientError : public Error {
public:
    using Error::Error;
};

class PreconditionError : public Error {
public:
    using Error::Error;
};

/// Iteration failed to reach its tolerance; carries the residual history.
class DivergenceError : public Error {
public:
    DivergenceError(const std::string& what, double last_residual, std::vector<double> history)
        : Error(what), last_residual_(last_residual), history_(std::move(history)) {}

    double last_residual() const noexcept { return last_residual_; }
    const std::vector<double>& history() const noexcept { return history_; }

private:
    double last_residual_;
    std::vector<double> history_;
};

/// Iterate collapsed to the zero field.
class VanishingError : public Error {
public:
    using Error::Error;
};

/// Malformed field file; offset is the byte position where parsing failed.
class FormatError : public Error {
public:
    FormatError(const std::string& what, std::size_t offset)
        : Error(what + " (at byte offset " + std::to_string(offset) + ")"), offset_(offset) {}

    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

}  // namespace bnls
