#pragma once

#include <string>
#include <vector>

#include "upl/parser.hpp"

namespace upl::detail {

enum class Tok {
  Ident,
  Backslash,
  Dot,
  LParen,
  RParen,
  Arrow,
  Le,
  Plus,
  Star,
  Eq,
  Colon,
  Assign,
  LBrace,
  RBrace,
  Comma,
  Bang,
  Amp,
  End,
};

struct Token {
  Tok kind;
  std::string text;
  std::size_t line;
  std::size_t column;
};

std::vector<Token> lex(const std::string& text, std::size_t first_line = 1);

const char* tok_name(Tok t);

/// Cursor over a token vector with error helpers.
class TokenStream {
 public:
  explicit TokenStream(std::vector<Token> toks) : toks_(std::move(toks)) {}

  const Token& peek(std::size_t k = 0) const {
    std::size_t i = pos_ + k;
    return i < toks_.size() ? toks_[i] : toks_.back();
  }
  bool at(Tok t) const { return peek().kind == t; }
  Token next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }
  bool accept(Tok t) {
    if (!at(t)) return false;
    next();
    return true;
  }
  Token expect(Tok t) {
    if (!at(t)) fail(std::string("expected ") + tok_name(t) + ", found " + describe(peek()));
    return next();
  }
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, peek().line, peek().column); }
  static std::string describe(const Token& t) {
    return t.kind == Tok::Ident ? "'" + t.text + "'" : std::string(tok_name(t.kind));
  }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

}  // namespace upl::detail
