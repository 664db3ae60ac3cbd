#pragma once

#include <stdexcept>
#include <string>

namespace homrot {

/// Input outside the domain of an operation (negative lengths, unnormalized amplitudes, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A numerical routine failed to reach its tolerance. The message carries diagnostics.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class FitError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// Problem size exceeds what a brute-force routine accepts.
class ResourceError : public std::length_error {
public:
    using std::length_error::length_error;
};

/// CW/ACW records could not be paired up.
class GroupingError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Malformed or invalid configuration. line() is 1-based, 0 when not tied to a line.
class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& message, int line = 0)
        : std::runtime_error(message), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

}  // namespace homrot
