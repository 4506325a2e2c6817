#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mpdag {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed edge-list or CSV input. `line()` is 1-based, 0 when unknown.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
        line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// A graph violates the invariants of the class it claims to be.
class GraphError : public Error {
 public:
  using Error::Error;
};

/// Caller passed arguments that violate an operation's preconditions
/// (unknown node, overlapping sets, empty treatment set, ...).
class ArgumentError : public Error {
 public:
  using Error::Error;
};

class InconsistentKnowledge : public Error {
 public:
  using Error::Error;
};

class NotTruncatable : public Error {
 public:
  using Error::Error;
};

class DegenerateConditioning : public Error {
 public:
  using Error::Error;
};

class EstimationError : public Error {
 public:
  using Error::Error;
};

}  // namespace mpdag
