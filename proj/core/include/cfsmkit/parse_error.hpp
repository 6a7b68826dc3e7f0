#pragma once

#include <stdexcept>
#include <string>

namespace cfsmkit {

/// Malformed textual input. Line and column are 1-based; zero when the
/// position is unknown (e.g. errors reported by the JSON reader).
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, int line = 0, int column = 0)
      : std::runtime_error(line > 0 ? std::to_string(line) + ":" + std::to_string(column) + ": " + what : what),
        line_(line),
        column_(column) {}

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

}  // namespace cfsmkit
