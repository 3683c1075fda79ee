#ifndef SHELLS_ERRORS_HPP_
#define SHELLS_ERRORS_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace shells {

/// Two vectors that must share a length do not.
class dimension_error : public std::invalid_argument {
 public:
  dimension_error(std::size_t expected, std::size_t actual)
      : std::invalid_argument("dimension mismatch: expected " + std::to_string(expected) + ", got " +
                              std::to_string(actual)) {}
};

class precondition_error : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Syntax error in an expression or problem document, with a 1-based position.
class parse_error : public std::runtime_error {
 public:
  parse_error(std::string const& message, std::size_t line, std::size_t column)
      : std::runtime_error(message + " (line " + std::to_string(line) + ", column " + std::to_string(column) + ")")
      , m_line(line)
      , m_column(column) {}

  [[nodiscard]] auto line() const { return m_line; }
  [[nodiscard]] auto column() const { return m_column; }

 private:
  std::size_t m_line;
  std::size_t m_column;
};

/// Semantically invalid problem document (unknown variable, unbounded box, ...).
class problem_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace shells

#endif  // SHELLS_ERRORS_HPP_
