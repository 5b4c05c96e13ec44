#pragma once

#include <stdexcept>
#include <string>

namespace edgebatch {

// Root of every error the library throws. Callers that only need to report a
// failure can catch this; the subclasses exist so that the CLI can map them to
// exit codes and tests can assert on the failure kind.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Too few samples for the requested operation.
class LengthError : public Error {
public:
    using Error::Error;
};

// A value outside the domain an operation accepts.
class DomainError : public Error {
public:
    using Error::Error;
};

// Normal equations of a least-squares fit are singular.
class FitError : public Error {
public:
    using Error::Error;
};

// A component was queried before it accumulated enough history.
class NotReadyError : public Error {
public:
    using Error::Error;
};

// A configuration violates an invariant.
class ConfigError : public Error {
public:
    using Error::Error;
};

// Operation not available in the current engine mode.
class ModeError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

// Malformed text input. `line` is 1-based, 0 when not tied to a line.
class ParseError : public Error {
public:
    ParseError(const std::string& what, int line)
        : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

    int line() const noexcept { return line_; }

private:
    int line_;
};

}  // namespace edgebatch
