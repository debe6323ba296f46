#pragma once

#include <stdexcept>
#include <string>

namespace fraktur {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated (bad parameter, malformed spec).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Evaluation outside the domain of a closed-form relation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Malformed mesh or config file. `line()` is 1-based, 0 when unknown.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line = 0)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

/// A linear or nonlinear solver failed to meet its contract.
class SolverError : public Error {
 public:
  using Error::Error;
};

}  // namespace fraktur
