#include "upl/term.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <stdexcept>

namespace upl {

namespace {

std::shared_ptr<const detail::TermNode> make_node(TermKind k, std::string name, Term a, Term b,
                                                  Instantiation inst = {}) {
  auto n = std::make_shared<detail::TermNode>();
  n->kind = k;
  n->name = std::move(name);
  n->size = 1 + (a.valid() ? a.size() : 0) + (b.valid() ? b.size() : 0);
  n->a = std::move(a);
  n->b = std::move(b);
  n->inst = std::move(inst);
  return n;
}

bool is_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

bool is_identifier(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!is_ident_char(c)) return false;
  return true;
}

}  // namespace

Term Term::var(std::string name) { return Term(make_node(TermKind::Var, std::move(name), {}, {})); }

Term Term::lam(std::string binder, Term body) {
  return Term(make_node(TermKind::Lam, std::move(binder), std::move(body), {}));
}

Term Term::app(Term fn, Term arg) {
  return Term(make_node(TermKind::App, {}, std::move(fn), std::move(arg)));
}

Term Term::app(Term fn, const std::vector<Term>& args) {
  for (const auto& a : args) fn = app(std::move(fn), a);
  return fn;
}

Term Term::constant(std::string name, Instantiation inst) {
  return Term(make_node(TermKind::Const, std::move(name), {}, {}, std::move(inst)));
}

TermKind Term::kind() const { return node_->kind; }
const std::string& Term::name() const { return node_->name; }
const Term& Term::body() const { return node_->a; }
const Term& Term::fn() const { return node_->a; }
const Term& Term::arg() const { return node_->b; }
const Instantiation& Term::instantiation() const { return node_->inst; }
std::size_t Term::size() const { return node_->size; }

Spine spine(const Term& m) {
  Spine s;
  Term cur = m;
  while (cur.is_app()) {
    s.args.push_back(cur.arg());
    cur = cur.fn();
  }
  s.head = cur;
  std::reverse(s.args.begin(), s.args.end());
  return s;
}

namespace {

void collect_free(const Term& m, std::vector<std::string>& bound, std::set<std::string>& out) {
  switch (m.kind()) {
    case TermKind::Var:
      if (std::find(bound.begin(), bound.end(), m.name()) == bound.end()) out.insert(m.name());
      return;
    case TermKind::Lam:
      bound.push_back(m.name());
      collect_free(m.body(), bound, out);
      bound.pop_back();
      return;
    case TermKind::App:
      collect_free(m.fn(), bound, out);
      collect_free(m.arg(), bound, out);
      return;
    case TermKind::Const:
      for (const auto& [n, t] : m.instantiation()) collect_free(t, bound, out);
      return;
  }
}

bool occurs_free_rec(const std::string& x, const Term& m) {
  switch (m.kind()) {
    case TermKind::Var:
      return m.name() == x;
    case TermKind::Lam:
      return m.name() != x && occurs_free_rec(x, m.body());
    case TermKind::App:
      return occurs_free_rec(x, m.fn()) || occurs_free_rec(x, m.arg());
    case TermKind::Const:
      for (const auto& [n, t] : m.instantiation())
        if (occurs_free_rec(x, t)) return true;
      return false;
  }
  return false;
}

void key_rec(const Term& m, std::vector<std::string>& bound, std::string& out) {
  switch (m.kind()) {
    case TermKind::Var: {
      for (std::size_t i = bound.size(); i-- > 0;) {
        if (bound[i] == m.name()) {
          out += '#';
          out += std::to_string(bound.size() - 1 - i);
          out += ';';
          return;
        }
      }
      out += 'v';
      out += m.name();
      out += ';';
      return;
    }
    case TermKind::Lam:
      out += '\\';
      bound.push_back(m.name());
      key_rec(m.body(), bound, out);
      bound.pop_back();
      return;
    case TermKind::App:
      out += '@';
      key_rec(m.fn(), bound, out);
      key_rec(m.arg(), bound, out);
      return;
    case TermKind::Const:
      out += 'c';
      out += m.name();
      out += ';';
      return;
  }
}

}  // namespace

std::set<std::string> free_vars(const Term& m) {
  std::set<std::string> out;
  std::vector<std::string> bound;
  collect_free(m, bound, out);
  return out;
}

bool occurs_free(const std::string& x, const Term& m) { return occurs_free_rec(x, m); }

std::string alpha_key(const Term& m) {
  std::string out;
  out.reserve(m.size() * 4);
  std::vector<std::string> bound;
  key_rec(m, bound, out);
  return out;
}

bool alpha_eq(const Term& a, const Term& b) {
  if (a.same_node(b)) return true;
  return alpha_key(a) == alpha_key(b);
}

std::string fresh_name(const std::string& base, const std::set<std::string>& avoid) {
  std::string candidate = base.empty() ? std::string("v") : base;
  while (avoid.count(candidate)) candidate += '\'';
  return candidate;
}

Term substitute(const Term& n, const std::unordered_map<std::string, Term>& sigma) {
  if (sigma.empty()) return n;
  switch (n.kind()) {
    case TermKind::Var: {
      auto it = sigma.find(n.name());
      return it == sigma.end() ? n : it->second;
    }
    case TermKind::Const: {
      if (n.instantiation().empty()) return n;
      Instantiation inst;
      for (const auto& [k, t] : n.instantiation()) inst.emplace_back(k, substitute(t, sigma));
      return Term::constant(n.name(), std::move(inst));
    }
    case TermKind::App: {
      Term f = substitute(n.fn(), sigma);
      Term a = substitute(n.arg(), sigma);
      if (f.same_node(n.fn()) && a.same_node(n.arg())) return n;
      return Term::app(std::move(f), std::move(a));
    }
    case TermKind::Lam: {
      const std::string& y = n.name();
      std::unordered_map<std::string, Term> inner;
      std::set<std::string> body_fv = free_vars(n.body());
      for (const auto& [k, t] : sigma)
        if (k != y && body_fv.count(k)) inner.emplace(k, t);
      if (inner.empty()) return n;
      bool capture = false;
      std::set<std::string> avoid = body_fv;
      for (const auto& [k, t] : inner) {
        auto fv = free_vars(t);
        if (fv.count(y)) capture = true;
        avoid.insert(fv.begin(), fv.end());
        avoid.insert(k);
      }
      if (!capture) return Term::lam(y, substitute(n.body(), inner));
      std::string z = fresh_name(y, avoid);
      inner.emplace(y, Term::var(z));
      return Term::lam(z, substitute(n.body(), inner));
    }
  }
  return n;
}

Term substitute(const Term& n, const std::string& x, const Term& m) {
  return substitute(n, std::unordered_map<std::string, Term>{{x, m}});
}

namespace {

std::string const_text(const std::string& name) {
  return is_identifier(name) ? name : "(" + name + ")";
}

void print_rec(const Term& m, std::string& out);

void print_atom(const Term& m, std::string& out) {
  if (m.is_var() || m.is_const()) {
    print_rec(m, out);
  } else {
    out += '(';
    print_rec(m, out);
    out += ')';
  }
}

void print_rec(const Term& m, std::string& out) {
  switch (m.kind()) {
    case TermKind::Var:
      out += m.name();
      return;
    case TermKind::Const:
      out += const_text(m.name());
      if (!m.instantiation().empty()) {
        out += '{';
        bool first = true;
        for (const auto& [k, t] : m.instantiation()) {
          if (!first) out += ", ";
          first = false;
          out += k + " := ";
          print_rec(t, out);
        }
        out += '}';
      }
      return;
    case TermKind::Lam:
      out += '\\';
      out += m.name();
      out += ". ";
      print_rec(m.body(), out);
      return;
    case TermKind::App: {
      Spine s = spine(m);
      print_atom(s.head, out);
      for (const auto& a : s.args) {
        out += ' ';
        print_atom(a, out);
      }
      return;
    }
  }
}

}  // namespace

std::string print_term(const Term& m) {
  std::string out;
  print_rec(m, out);
  return out;
}

Pattern Pattern::var(std::string name) {
  Pattern p;
  p.is_var_ = true;
  p.name_ = std::move(name);
  return p;
}

Pattern Pattern::con(std::string ctor, std::vector<Pattern> args) {
  Pattern p;
  p.is_var_ = false;
  p.name_ = std::move(ctor);
  p.args_ = std::move(args);
  return p;
}

void Pattern::collect_vars(std::vector<std::string>& out) const {
  if (is_var_) {
    out.push_back(name_);
    return;
  }
  for (const auto& a : args_) a.collect_vars(out);
}

Term Pattern::to_term() const {
  if (is_var_) return Term::var(name_);
  std::vector<Term> args;
  for (const auto& a : args_) args.push_back(a.to_term());
  return Term::app(Term::constant(name_), args);
}

std::string print_pattern(const Pattern& p) {
  if (p.is_var()) return p.name();
  if (p.args().empty()) return const_text(p.name());
  std::string out = "(" + const_text(p.name());
  for (const auto& a : p.args()) out += " " + print_pattern(a);
  return out + ")";
}

}  // namespace upl
