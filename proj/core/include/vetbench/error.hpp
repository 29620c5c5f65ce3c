#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace vetbench {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed text input. `line` and `column` are 1-based; 0 means unknown.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column)
      : Error(format(what, line, column)), message_(what), line_(line), column_(column) {}

  /// The message without the position prefix.
  const std::string& message() const noexcept { return message_; }

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  static std::string format(const std::string& what, std::size_t line,
                            std::size_t column) {
    std::string out;
    if (line != 0) out += "line " + std::to_string(line) + ": ";
    if (column != 0) out += "column " + std::to_string(column) + ": ";
    return out + what;
  }

  std::string message_;
  std::size_t line_;
  std::size_t column_;
};

/// Input that parsed but references something unknown or ill-typed.
class ValidationError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace vetbench
