#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace fracvar {

/// Base class of every error thrown by this library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Argument outside the mathematical domain of an operation
/// (pole of the gamma function, x < a for a left integral, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Fractional order outside the range supported by an operator.
class OrderError : public Error {
 public:
  using Error::Error;
};

/// Input outside the supported numeric range (|z| > 10 for Mittag-Leffler).
class OutOfRangeError : public Error {
 public:
  using Error::Error;
};

/// A series or quadrature could not reach the requested accuracy.
class AccuracyError : public Error {
 public:
  using Error::Error;
};

/// Inconsistent or invalid arguments (empty search range, zero multipliers).
class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// Expression evaluation failed (ln of a non-positive value, division by
/// zero, undeclared coefficient). Carries the grid node index when the
/// failure happened while evaluating over a grid.
class EvaluationError : public Error {
 public:
  explicit EvaluationError(const std::string& what,
                           std::optional<std::size_t> node = std::nullopt)
      : Error(node ? what + " (at node " + std::to_string(*node) + ")" : what),
        node_(node) {}

  std::optional<std::size_t> node() const { return node_; }

 private:
  std::optional<std::size_t> node_;
};

/// Lexical or syntactic error in an expression. Carries the byte offset
/// into the source text.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : Error(what + " (at offset " + std::to_string(offset) + ")"),
        offset_(offset) {}

  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

/// A derivative that cannot be expressed within the AST node set.
class DifferentiationError : public Error {
 public:
  using Error::Error;
};

/// Problem-file violates the schema (missing field, bad enum value,
/// undeclared coefficient).
class SchemaError : public Error {
 public:
  using Error::Error;
};

/// The multiplier search could not bracket a root of the constraint defect.
class BracketingError : public Error {
 public:
  using Error::Error;
};

/// Non-finite values emerged where the algorithm cannot recover
/// (NaN during a line search).
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace fracvar
