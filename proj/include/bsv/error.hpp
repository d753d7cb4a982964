#ifndef BSV_ERROR_HPP
#define BSV_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace bsv {

enum class ErrorKind {
  Syntax,      // malformed source text
  Validation,  // well-formed but violates a structural rule
  Lookup,      // unknown class, method, variable, property id
  Evaluation,  // formula cannot be evaluated in the given context
  Budget,      // enumeration would exceed the configured cap
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Syntax: return "syntax error";
    case ErrorKind::Validation: return "validation error";
    case ErrorKind::Lookup: return "lookup error";
    case ErrorKind::Evaluation: return "evaluation error";
    case ErrorKind::Budget: return "budget exceeded";
  }
  return "error";
}

/// Single exception type for the library. Source positions are 1-based and
/// zero when not applicable.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message, std::size_t line = 0, std::size_t column = 0)
      : std::runtime_error(format(kind, message, line, column)),
        kind_(kind), line_(line), column_(column) {}

  ErrorKind kind() const noexcept { return kind_; }
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  static std::string format(ErrorKind kind, const std::string& message, std::size_t line,
                            std::size_t column) {
    std::string out = to_string(kind);
    if (line != 0) {
      out += " at " + std::to_string(line) + ":" + std::to_string(column);
    }
    out += ": " + message;
    return out;
  }

  ErrorKind kind_;
  std::size_t line_;
  std::size_t column_;
};

}  // namespace bsv

#endif  // BSV_ERROR_HPP
