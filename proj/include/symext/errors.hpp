#ifndef SYMEXT_ERRORS_HPP
#define SYMEXT_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace symext {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Operands were built over two different forcing posets.
class MismatchedInstance : public Error {
public:
    explicit MismatchedInstance(const std::string& what)
        : Error("mismatched instance: " + what) {}
};

/// An instance or instance spec violates a validator constraint.
class InvalidInstance : public Error {
public:
    explicit InvalidInstance(const std::string& what)
        : Error("invalid instance: " + what) {}
};

class InvalidCondition : public Error {
public:
    explicit InvalidCondition(const std::string& what)
        : Error("invalid condition: " + what) {}
};

class CutoffExceeded : public Error {
public:
    explicit CutoffExceeded(const std::string& what)
        : Error("cutoff exceeded: " + what) {}
};

/// No spare fiber index is left for a swap partner.
class FiberExhausted : public Error {
public:
    explicit FiberExhausted(const std::string& what)
        : Error("fiber exhausted: " + what) {}
};

/// A name uses cells above the stage it was declared for.
class StageViolation : public Error {
public:
    explicit StageViolation(const std::string& what)
        : Error("stage violation: " + what) {}
};

/// Requested enumeration would exceed the engine's hard limits.
class TooLarge : public Error {
public:
    explicit TooLarge(const std::string& what)
        : Error("too large: " + what) {}
};

/// An operation was called outside its documented precondition.
class PreconditionViolated : public Error {
public:
    explicit PreconditionViolated(const std::string& what)
        : Error("precondition violated: " + what) {}
};

class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line, std::size_t column)
        : Error("parse error at " + std::to_string(line) + ":" + std::to_string(column) + ": " + what),
          line_(line),
          column_(column) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

} // namespace symext

#endif // SYMEXT_ERRORS_HPP
