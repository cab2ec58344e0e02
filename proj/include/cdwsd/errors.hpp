#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cdwsd {

/// Error raised while reading one of the text formats (taxonomy interchange,
/// gold corpus). `line` is 1-based; `column` is 1-based or 0 when the error
/// concerns the file as a whole (e.g. a hypernym cycle).
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line = 0, std::size_t column = 0)
      : std::runtime_error(format(what, line, column)), line_(line), column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  static std::string format(const std::string& what, std::size_t line, std::size_t column) {
    if (line == 0) return what;
    std::string out = "line " + std::to_string(line);
    if (column != 0) out += ", column " + std::to_string(column);
    out += ": " + what;
    return out;
  }

  std::size_t line_;
  std::size_t column_;
};

}  // namespace cdwsd
