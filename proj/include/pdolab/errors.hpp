#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pdolab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A value violates a documented invariant (non-finite sample, bad grid size, ...).
class InvariantError : public Error {
public:
    using Error::Error;
};

/// A lookup fell outside the stored range of a table or kernel.
class RangeError : public Error {
public:
    using Error::Error;
};

/// Two operands live on different grids.
class GridMismatch : public Error {
public:
    using Error::Error;
};

/// The operation is not available for this backend (e.g. x-derivative of an
/// opaque closed form).
class UnsupportedOperation : public Error {
public:
    using Error::Error;
};

/// A hypoelliptic model produced a negative principal symbol.
class ModelViolation : public Error {
public:
    using Error::Error;
};

/// A quadrature would exceed the configured term budget.
class CostGuardError : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(const std::string& message, std::size_t line, std::size_t column)
        : Error(message + " at line " + std::to_string(line) + ", column " +
                std::to_string(column)),
          line_(line),
          column_(column) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

} // namespace pdolab
