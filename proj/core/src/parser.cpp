#include "upl/parser.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "lexer.hpp"

namespace upl {
namespace detail {

const char* tok_name(Tok t) {
  switch (t) {
    case Tok::Ident: return "identifier";
    case Tok::Backslash: return "'\\'";
    case Tok::Dot: return "'.'";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::Arrow: return "'->'";
    case Tok::Le: return "'<='";
    case Tok::Plus: return "'+'";
    case Tok::Star: return "'*'";
    case Tok::Eq: return "'='";
    case Tok::Colon: return "':'";
    case Tok::Assign: return "':='";
    case Tok::LBrace: return "'{'";
    case Tok::RBrace: return "'}'";
    case Tok::Comma: return "','";
    case Tok::Bang: return "'!'";
    case Tok::Amp: return "'&'";
    case Tok::End: return "end of input";
  }
  return "?";
}

std::vector<Token> lex(const std::string& text, std::size_t first_line) {
  std::vector<Token> out;
  std::size_t line = first_line, col = 1;
  std::size_t i = 0;
  auto push = [&](Tok k, std::string s, std::size_t c) { out.push_back({k, std::move(s), line, c}); };
  while (i < text.size()) {
    char c = text[i];
    if (c == '\n') {
      ++line;
      col = 1;
      ++i;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      ++col;
      continue;
    }
    std::size_t start_col = col;
    if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'') {
      std::size_t j = i;
      while (j < text.size() &&
             (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_' || text[j] == '\''))
        ++j;
      push(Tok::Ident, text.substr(i, j - i), start_col);
      col += j - i;
      i = j;
      continue;
    }
    auto two = text.substr(i, 2);
    if (two == "->") {
      push(Tok::Arrow, two, start_col);
    } else if (two == "<=") {
      push(Tok::Le, two, start_col);
    } else if (two == ":=") {
      push(Tok::Assign, two, start_col);
    } else {
      Tok k;
      switch (c) {
        case '\\': k = Tok::Backslash; break;
        case '.': k = Tok::Dot; break;
        case '(': k = Tok::LParen; break;
        case ')': k = Tok::RParen; break;
        case '+': k = Tok::Plus; break;
        case '*': k = Tok::Star; break;
        case '=': k = Tok::Eq; break;
        case ':': k = Tok::Colon; break;
        case '{': k = Tok::LBrace; break;
        case '}': k = Tok::RBrace; break;
        case ',': k = Tok::Comma; break;
        case '!': k = Tok::Bang; break;
        case '&': k = Tok::Amp; break;
        default:
          throw ParseError(std::string("unexpected character '") + c + "'", line, start_col);
      }
      push(k, std::string(1, c), start_col);
      ++i;
      ++col;
      continue;
    }
    i += 2;
    col += 2;
  }
  out.push_back({Tok::End, "", line, col});
  return out;
}

}  // namespace detail

namespace {

using detail::Tok;
using detail::TokenStream;

const char* op_name(Tok t) {
  switch (t) {
    case Tok::Le: return "<=";
    case Tok::Plus: return "+";
    case Tok::Star: return "*";
    default: return nullptr;
  }
}

class TermParser {
 public:
  TermParser(TokenStream& ts, const Signature& sig) : ts_(ts), sig_(sig) {}

  Term expr() {
    if (ts_.at(Tok::Backslash)) return lambda();
    if (is_pi()) return pi();
    return arrow();
  }

 private:
  bool is_pi() const { return ts_.at(Tok::Ident) && ts_.peek().text == "Pi"; }

  Term lambda() {
    ts_.expect(Tok::Backslash);
    std::vector<std::string> binders;
    do {
      auto t = ts_.expect(Tok::Ident);
      if (t.text == "Pi") ts_.fail("'Pi' cannot be used as a binder");
      binders.push_back(t.text);
    } while (ts_.at(Tok::Ident));
    ts_.expect(Tok::Dot);
    for (const auto& b : binders) bound_.push_back(b);
    Term body = expr();
    bound_.resize(bound_.size() - binders.size());
    for (auto it = binders.rbegin(); it != binders.rend(); ++it) body = Term::lam(*it, body);
    return body;
  }

  void require_fun() const {
    if (!sig_.is_constructor("Fun") || *sig_.arity("Fun") != 2)
      ts_.fail("dependent function syntax needs a binary constructor 'Fun'");
  }

  Term pi() {
    require_fun();
    ts_.next();
    auto x = ts_.expect(Tok::Ident).text;
    ts_.expect(Tok::Colon);
    Term dom = expr();
    ts_.expect(Tok::Dot);
    bound_.push_back(x);
    Term cod = expr();
    bound_.pop_back();
    return Term::app(Term::constant("Fun"), {dom, Term::lam(x, cod)});
  }

  Term arrow() {
    Term lhs = infix();
    if (!ts_.at(Tok::Arrow)) return lhs;
    require_fun();
    ts_.next();
    Term rhs = expr();
    std::string x = fresh_name("_", free_vars(rhs));
    return Term::app(Term::constant("Fun"), {lhs, Term::lam(x, rhs)});
  }

  Term infix() {
    Term lhs = app();
    while (const char* op = op_name(ts_.peek().kind)) {
      if (!sig_.is_constant(op)) ts_.fail(std::string("operator '") + op + "' is not declared");
      ts_.next();
      Term rhs = app();
      lhs = Term::app(Term::constant(op), {lhs, rhs});
    }
    return lhs;
  }

  bool atom_start() const {
    return (ts_.at(Tok::Ident) && ts_.peek().text != "Pi") || ts_.at(Tok::LParen);
  }

  Term app() {
    if (!atom_start()) ts_.fail("expected a term, found " + TokenStream::describe(ts_.peek()));
    Term head = atom();
    while (true) {
      if (atom_start()) {
        head = Term::app(head, atom());
      } else if (ts_.at(Tok::Backslash) || is_pi()) {
        head = Term::app(head, expr());
        break;
      } else {
        break;
      }
    }
    return head;
  }

  bool is_bound(const std::string& x) const { return std::find(bound_.begin(), bound_.end(), x) != bound_.end(); }

  Term atom() {
    if (ts_.accept(Tok::LParen)) {
      if (const char* op = op_name(ts_.peek().kind); op && ts_.peek(1).kind == Tok::RParen) {
        if (!sig_.is_constant(op)) ts_.fail(std::string("operator '") + op + "' is not declared");
        ts_.next();
        ts_.next();
        return Term::constant(op);
      }
      Term inner = expr();
      ts_.expect(Tok::RParen);
      return inner;
    }
    auto t = ts_.expect(Tok::Ident);
    if (is_bound(t.text) || !sig_.is_constant(t.text)) {
      if (ts_.at(Tok::LBrace)) ts_.fail("instantiation on non-constant '" + t.text + "'");
      return Term::var(t.text);
    }
    Instantiation inst;
    if (ts_.accept(Tok::LBrace)) {
      do {
        auto name = ts_.expect(Tok::Ident).text;
        ts_.expect(Tok::Assign);
        inst.emplace_back(name, expr());
      } while (ts_.accept(Tok::Comma));
      ts_.expect(Tok::RBrace);
    }
    return Term::constant(t.text, std::move(inst));
  }

  TokenStream& ts_;
  const Signature& sig_;
  std::vector<std::string> bound_;
};

Pattern to_pattern(const Term& t, const Signature& sig, std::size_t line) {
  if (t.is_var()) return Pattern::var(t.name());
  Spine s = spine(t);
  if (!s.head.is_const() || !sig.is_constructor(s.head.name()))
    throw ParseError("rule pattern must be a variable or a constructor application: " + print_term(t), line, 1);
  std::vector<Pattern> args;
  for (const auto& a : s.args) args.push_back(to_pattern(a, sig, line));
  return Pattern::con(s.head.name(), std::move(args));
}

int parse_arity(const std::string& s, std::size_t line) {
  if (s.empty() || !std::all_of(s.begin(), s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
    throw ParseError("arity must be a non-negative integer, got '" + s + "'", line, 1);
  return std::stoi(s);
}

}  // namespace

Term parse_term(const std::string& text, const Signature& sig) {
  TokenStream ts(detail::lex(text));
  TermParser p(ts, sig);
  Term t = p.expr();
  if (!ts.at(Tok::End)) ts.fail("unexpected " + TokenStream::describe(ts.peek()));
  return t;
}

Signature parse_signature(const std::string& text) {
  struct Line {
    std::size_t number;
    std::string body;
  };
  std::vector<Line> rule_lines;
  Signature sig;
  std::istringstream in(text);
  std::string raw;
  std::size_t number = 0;
  while (std::getline(in, raw)) {
    ++number;
    if (auto h = raw.find('#'); h != std::string::npos) raw.erase(h);
    std::istringstream ls(raw);
    std::string kw;
    if (!(ls >> kw)) continue;
    if (kw == "constructor" || kw == "defined") {
      std::string name, ar, extra;
      if (!(ls >> name >> ar) || (ls >> extra)) throw ParseError("expected '" + kw + " NAME ARITY'", number, 1);
      try {
        if (kw == "constructor")
          sig.add_constructor(name, parse_arity(ar, number));
        else
          sig.add_defined(name, parse_arity(ar, number));
      } catch (const std::invalid_argument& e) {
        throw ParseError(e.what(), number, 1);
      }
    } else if (kw == "rule") {
      rule_lines.push_back({number, raw.substr(raw.find("rule") + 4)});
    } else {
      throw ParseError("unknown directive '" + kw + "'", number, 1);
    }
  }
  for (const auto& rl : rule_lines) {
    TokenStream ts(detail::lex(rl.body, rl.number));
    TermParser p(ts, sig);
    Term lhs = p.expr();
    ts.expect(Tok::Eq);
    Term rhs = p.expr();
    if (!ts.at(Tok::End)) ts.fail("unexpected " + TokenStream::describe(ts.peek()));
    Spine s = spine(lhs);
    if (!s.head.is_const() || !sig.is_defined(s.head.name()))
      throw ParseError("rule head must be a defined constant", rl.number, 1);
    RewriteRule r;
    r.head = s.head.name();
    for (const auto& a : s.args) r.lhs.push_back(to_pattern(a, sig, rl.number));
    r.rhs = rhs;
    sig.add_rule(std::move(r));
  }
  return sig;
}

}  // namespace upl
