#pragma once

#include <stdexcept>
#include <string>

namespace bandgraph {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A PeriodicGraphSpec violates a structural invariant.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// The periodic cover is not connected.
class DisconnectedGraphError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

/// A numeric parameter is out of its admissible range.
class ParameterError : public Error {
public:
    using Error::Error;
};

/// An operation was called on a graph that does not satisfy its precondition.
class PreconditionError : public Error {
public:
    using Error::Error;
};

class NumericInputError : public Error {
public:
    using Error::Error;
};

class DomainError : public Error {
public:
    using Error::Error;
};

class ConvergenceError : public Error {
public:
    using Error::Error;
};

/// Singular leading block in a Schur-complement determinant.
class PivotError : public Error {
public:
    using Error::Error;
};

/// Malformed graph file or builtin identifier. `path` locates the offending field.
class ParseError : public Error {
public:
    ParseError(std::string path, const std::string& message)
        : Error(path.empty() ? message : path + ": " + message), path_(std::move(path)) {}

    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

}  // namespace bandgraph
