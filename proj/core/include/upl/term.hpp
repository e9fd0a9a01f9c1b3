#pragma once

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace upl {

class Term;

/// Explicit schematic instantiation attached to a constant occurrence,
/// written `c{A := T, ...}` in the surface syntax. It is erased by
/// reduction and by alpha-equivalence; only the dependent checker reads it.
using Instantiation = std::vector<std::pair<std::string, Term>>;

enum class TermKind { Var, Lam, App, Const };

namespace detail {
struct TermNode;
}

/// Immutable untyped term: variables, abstractions, applications and
/// constants. Copies share structure.
class Term {
 public:
  Term() = default;

  static Term var(std::string name);
  static Term lam(std::string binder, Term body);
  static Term app(Term fn, Term arg);
  static Term app(Term fn, const std::vector<Term>& args);
  static Term constant(std::string name, Instantiation inst = {});

  TermKind kind() const;
  bool is_var() const { return kind() == TermKind::Var; }
  bool is_lam() const { return kind() == TermKind::Lam; }
  bool is_app() const { return kind() == TermKind::App; }
  bool is_const() const { return kind() == TermKind::Const; }

  /// Variable name, binder name or constant name.
  const std::string& name() const;
  /// Body of an abstraction.
  const Term& body() const;
  /// Function part of an application.
  const Term& fn() const;
  /// Argument part of an application.
  const Term& arg() const;
  const Instantiation& instantiation() const;

  bool valid() const { return node_ != nullptr; }
  /// Physical identity; use alpha_eq for the observable equality.
  bool same_node(const Term& other) const { return node_ == other.node_; }
  std::size_t size() const;

 private:
  explicit Term(std::shared_ptr<const detail::TermNode> n) : node_(std::move(n)) {}
  std::shared_ptr<const detail::TermNode> node_;
};

namespace detail {
struct TermNode {
  TermKind kind;
  std::string name;
  Term a;
  Term b;
  Instantiation inst;
  std::size_t size = 1;
};
}  // namespace detail

/// Head and arguments of an application spine `h a1 ... an`.
struct Spine {
  Term head;
  std::vector<Term> args;
};

Spine spine(const Term& m);

std::set<std::string> free_vars(const Term& m);
bool occurs_free(const std::string& x, const Term& m);

/// Canonical key: equal iff the terms are alpha-equivalent.
std::string alpha_key(const Term& m);
bool alpha_eq(const Term& a, const Term& b);

/// A name based on `base` that is not in `avoid`.
std::string fresh_name(const std::string& base, const std::set<std::string>& avoid);

/// Capture-avoiding substitution n(x = m).
Term substitute(const Term& n, const std::string& x, const Term& m);
/// Simultaneous capture-avoiding substitution.
Term substitute(const Term& n, const std::unordered_map<std::string, Term>& sigma);

/// Prints in the concrete syntax accepted by parse_term. Operator constants
/// are printed in section form, e.g. `(+)`.
std::string print_term(const Term& m);

/// Patterns: `x | c p1 ... pl`.
class Pattern {
 public:
  static Pattern var(std::string name);
  static Pattern con(std::string ctor, std::vector<Pattern> args);

  bool is_var() const { return is_var_; }
  const std::string& name() const { return name_; }
  const std::vector<Pattern>& args() const { return args_; }

  void collect_vars(std::vector<std::string>& out) const;
  Term to_term() const;

 private:
  bool is_var_ = true;
  std::string name_;
  std::vector<Pattern> args_;
};

std::string print_pattern(const Pattern& p);

}  // namespace upl
