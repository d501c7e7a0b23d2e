#ifndef SPLITMC_ERROR_HPP
#define SPLITMC_ERROR_HPP

#include <stdexcept>
#include <string>

namespace splitmc {

// All recoverable failures surface as one of these; the CLI maps them to
// exit codes > 2.
enum class ErrorKind {
  Syntax,      // unparsable text (guard grammar, model JSON)
  UnknownId,   // reference to a node/edge/variable/value that does not exist
  Domain,      // value not in the referenced variable's domain
  Duplicate,   // redefinition of a name or connection
  Input,       // invalid arguments (sizes, caps, missing sections)
};

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, std::string message)
      : std::runtime_error(std::move(message)), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

private:
  ErrorKind kind_;
};

// Guard-grammar failure with a position inside the offending string.
class ParseError : public Error {
public:
  ParseError(std::string message, int line, int column)
      : Error(ErrorKind::Syntax, message + " at line " + std::to_string(line) +
                                     ", column " + std::to_string(column)),
        line_(line), column_(column) {}

  int line() const { return line_; }
  int column() const { return column_; }

private:
  int line_;
  int column_;
};

}  // namespace splitmc

#endif
