#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace revdyn {

/// Base for every failure raised by the library. Domain errors map to CLI
/// exit status 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent text document. Carries the 1-based line number
/// (0 when the problem is not tied to a line, e.g. a missing table row).
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// A precondition of an operation does not hold for the given values.
class DomainError : public Error {
 public:
  using Error::Error;
};

}  // namespace revdyn
