#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace crnext {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed .crn text. Line and column are 1-based.
struct SyntaxError : Error {
  SyntaxError(std::size_t line, std::size_t column, const std::string& message)
      : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message),
        line(line),
        column(column),
        detail(message) {}

  std::size_t line;
  std::size_t column;
  std::string detail;
};

// Well-formed input that violates a network invariant (self-loop, duplicate reaction, ...).
struct ValidationError : Error {
  using Error::Error;
};

struct IoError : Error {
  using Error::Error;
};

struct DimensionError : Error {
  using Error::Error;
};

// Solver ran out of pivots or branch-and-bound nodes. Never a verdict.
struct IterationLimit : Error {
  using Error::Error;
};

// Forest enumeration exceeded its candidate cap.
struct BudgetExceeded : Error {
  using Error::Error;
};

// State-space exploration exceeded its state cap.
struct StateBudgetExceeded : Error {
  using Error::Error;
};

}  // namespace crnext
