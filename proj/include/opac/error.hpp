#pragma once

#include <stdexcept>
#include <string>

namespace opac {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Parse failure in a model or property text. Line/column are 1-based.
class SyntaxError : public Error {
public:
    SyntaxError(const std::string& message, int line, int column)
        : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
          line_(line), column_(column), message_(message) {}

    int line() const { return line_; }
    int column() const { return column_; }
    const std::string& bare_message() const { return message_; }

private:
    int line_;
    int column_;
    std::string message_;
};

/// Semantic problems found while expanding a model source (duplicate or
/// undeclared identifiers, overlapping guards, non-stochastic commands, ...).
class ModelError : public Error {
public:
    using Error::Error;
};

class UnknownLabel : public Error {
public:
    using Error::Error;
};

class UnknownAtom : public Error {
public:
    using Error::Error;
};

/// ⊥ and raw path negation are parsed but have no trace construction.
class UnsupportedPathForm : public Error {
public:
    using Error::Error;
};

/// A configured cap (DFA states, product states, expression count) was exceeded.
class ResourceLimit : public Error {
public:
    using Error::Error;
};

class InvalidWalk : public Error {
public:
    using Error::Error;
};

class DivergentCycle : public Error {
public:
    using Error::Error;
};

class SingularSystem : public Error {
public:
    using Error::Error;
};

class NonConvergence : public Error {
public:
    NonConvergence(const std::string& message, double last_estimate)
        : Error(message), last_estimate_(last_estimate) {}
    double last_estimate() const { return last_estimate_; }

private:
    double last_estimate_;
};

}  // namespace opac
