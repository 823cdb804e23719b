#pragma once

#include <stdexcept>
#include <string>

namespace abelwave {

/// Base class for every failure raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the domain where a map or field is defined.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Iterative procedure (root finder, quadrature, product, Lévy quotient) did
/// not reach its tolerance within the iteration cap.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, double last_delta)
        : Error(what), last_delta_(last_delta) {}
    explicit ConvergenceError(const std::string& what) : Error(what) {}

    double last_delta() const noexcept { return last_delta_; }

private:
    double last_delta_ = 0.0;
};

/// A hypothesis required by the requested computation does not hold.
class HypothesisError : public Error {
public:
    using Error::Error;
};

/// Requested combination is not supported (e.g. closed form of a custom curve).
class UnsupportedError : public Error {
public:
    using Error::Error;
};

/// Malformed configuration or command line input.
class ConfigError : public Error {
public:
    ConfigError(const std::string& what, int line = 0)
        : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

    int line() const noexcept { return line_; }

private:
    int line_ = 0;
};

}  // namespace abelwave
