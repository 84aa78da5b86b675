#ifndef TORIC_ERRORS_HPP
#define TORIC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace toric {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Out-of-range option, malformed spec field, mismatched grids.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// A function evaluates to -inf (or NaN) away from the pole.
class PoleConditionError : public Error {
 public:
  using Error::Error;
};

/// Conjugate of a function that is +inf everywhere.
class UndefinedConjugateError : public Error {
 public:
  using Error::Error;
};

/// A rooftop schedule that would let truncation decide the verdict.
class ProtocolError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class DegenerateGeodesicError : public Error {
 public:
  using Error::Error;
};

/// An asymptotic slope history that oscillates instead of settling.
class NoLimitError : public Error {
 public:
  using Error::Error;
};

/// Malformed JSON input; carries the 1-based line and column.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column)
      : Error(what + " (line " + std::to_string(line) + ", column " + std::to_string(column) + ")"),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

}  // namespace toric

#endif  // TORIC_ERRORS_HPP
