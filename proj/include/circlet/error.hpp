#pragma once

#include <stdexcept>
#include <string>

namespace circlet {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated (non-positive scale, bad grid...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Signal carries too much energy near the top of its spectrum for spectral methods.
class AliasingError : public Error {
 public:
  using Error::Error;
};

/// Signal does not decay fast enough at the boundary of its domain or window.
class DecayError : public Error {
 public:
  using Error::Error;
};

/// Malformed input file. `line()` is 1-based, 0 when not tied to a line.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(line ? what + " (line " + std::to_string(line) + ")" : what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace circlet
