#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace imurep {

// Base for every error the library raises; the CLI maps any of these to a
// nonzero exit code with a one-line diagnostic.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class EmptySeriesError : public Error {
public:
    using Error::Error;
};

class InvalidWindowError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class InputError : public Error {
public:
    using Error::Error;
};

class DuplicateLabelError : public Error {
public:
    using Error::Error;
};

// Carries the 1-based line number of the offending input line (0 if unknown).
class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& what)
        : Error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class StreamOrderError : public ParseError {
public:
    using ParseError::ParseError;
};

class FormatVersionError : public ParseError {
public:
    using ParseError::ParseError;
};

}  // namespace imurep
