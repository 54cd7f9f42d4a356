#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace distsparse {

// Base for every failure the library reports. kind() is a stable,
// machine-readable tag that the CLI copies into its error object.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& detail)
      : std::runtime_error(detail), kind_(std::move(kind)) {}

  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

// Malformed edge-list or family document. line() is 1-based; 0 when the
// problem is not tied to a line.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& detail)
      : Error("parse_error",
              line == 0 ? detail
                        : "line " + std::to_string(line) + ": " + detail),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// Argument outside the documented domain (epsilon, k, site id, ...).
class InvalidArgument : public Error {
 public:
  explicit InvalidArgument(const std::string& detail)
      : Error("invalid_argument", detail) {}
};

// Vector/matrix/graph sizes disagree.
class DimensionMismatch : public Error {
 public:
  explicit DimensionMismatch(const std::string& detail)
      : Error("dimension_mismatch", detail) {}
};

// Structural precondition of an operation does not hold for the input
// (not a sunflower, threshold unmet, edge not in graph, ...).
class PreconditionError : public Error {
 public:
  explicit PreconditionError(const std::string& detail)
      : Error("precondition_violation", detail) {}
};

}  // namespace distsparse
