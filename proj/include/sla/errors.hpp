#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sla {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class SingularTensor : public Error {
public:
  using Error::Error;
};

/// A triangle (or material point) whose Jacobian became non-positive.
class ElementInverted : public Error {
public:
  explicit ElementInverted(const std::string& what, long element = -1, long step = -1)
      : Error(what), element_(element), step_(step) {}

  long element() const noexcept { return element_; }
  long step() const noexcept { return step_; }

private:
  long element_;
  long step_;
};

class InvalidGeometry : public Error {
public:
  using Error::Error;
};

class SolverBreakdown : public Error {
public:
  using Error::Error;
};

class NoConvergence : public Error {
public:
  using Error::Error;
};

/// Malformed configuration text. line() is 1-based, or 0 when the error does
/// not come from a file (e.g. a command-line override).
class ParseError : public Error {
public:
  explicit ParseError(const std::string& what) : Error(what), line_(0) {}
  ParseError(const std::string& what, std::size_t line)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

class ValidationError : public Error {
public:
  using Error::Error;
};

class IoError : public Error {
public:
  using Error::Error;
};

}  // namespace sla
