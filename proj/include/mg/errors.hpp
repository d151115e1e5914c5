#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mg {

/// Malformed input text. Carries the 1-based source position of the offending token.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, std::size_t line, std::size_t column)
      : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// Well-formed input that uses a construct outside the supported fragment
/// (Int sorts, inv-constraint, ...). Corpus scanning skips these.
class UnsupportedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Ill-sorted term or arity mismatch.
class TypeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class EvalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class MaterializeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mg
