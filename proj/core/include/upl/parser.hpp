#pragma once

#include <stdexcept>
#include <string>

#include "upl/signature.hpp"
#include "upl/term.hpp"

namespace upl {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, std::size_t line, std::size_t column)
      : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + msg),
        line_(line),
        column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// Parses a term. Identifiers declared in `sig` and not shadowed by an
/// enclosing binder are constants; everything else is a variable.
///
/// Beyond the core grammar the parser accepts the infix operators `<=`,
/// `+`, `*` (left associative, binding looser than application), operator
/// sections `(+)`, explicit instantiations `c{A := T}`, and, when `Fun` is
/// a constructor, `Pi x:A. B` and `A -> B` for `Fun A (\x. B)`.
Term parse_term(const std::string& text, const Signature& sig);

/// Parses the line-oriented signature format. Does not validate; see
/// validate_signature.
Signature parse_signature(const std::string& text);

}  // namespace upl
