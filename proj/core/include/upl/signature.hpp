#pragma once

#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "upl/term.hpp"

namespace upl {

struct RewriteRule {
  std::string head;
  std::vector<Pattern> lhs;
  Term rhs;

  /// Pattern variables in left-to-right order.
  std::vector<std::string> vars() const;
  Term lhs_term() const;
};

enum class ConstKind { Constructor, Defined };

/// Constructors and defined constants with their arities, plus the
/// rewrite rules of the defined constants. Declaration order is kept so
/// that enumerations over the signature are deterministic.
class Signature {
 public:
  void add_constructor(const std::string& name, int arity);
  void add_defined(const std::string& name, int arity);
  void add_rule(RewriteRule rule);

  bool is_constructor(const std::string& name) const { return ctor_arity_.count(name) > 0; }
  bool is_defined(const std::string& name) const { return def_arity_.count(name) > 0; }
  bool is_constant(const std::string& name) const { return is_constructor(name) || is_defined(name); }
  std::optional<int> arity(const std::string& name) const;

  const std::vector<std::pair<std::string, int>>& constructors() const { return ctors_; }
  const std::vector<std::pair<std::string, int>>& defineds() const { return defs_; }
  const std::vector<RewriteRule>& rules() const { return rules_; }
  /// Indices into rules() of the rules whose head is `f`.
  std::vector<std::size_t> rules_for(const std::string& f) const;

 private:
  std::vector<std::pair<std::string, int>> ctors_;
  std::vector<std::pair<std::string, int>> defs_;
  std::unordered_map<std::string, int> ctor_arity_;
  std::unordered_map<std::string, int> def_arity_;
  std::vector<RewriteRule> rules_;
  std::unordered_map<std::string, std::vector<std::size_t>> by_head_;
};

enum class ViolationKind {
  NameClash,
  UnknownHead,
  ArityMismatch,
  NonLinearLhs,
  RhsFreeVariable,
  Overlap,
};

const char* violation_name(ViolationKind k);

struct Violation {
  ViolationKind kind;
  std::string message;
  std::vector<std::size_t> rules;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
  bool has(ViolationKind k) const;
};

ValidationReport validate_signature(const Signature& sig);

/// First-order substitution on patterns.
using PatternSubst = std::map<std::string, Pattern>;

/// Syntactic unification of two pattern tuples of equal length. The caller
/// is responsible for renaming the two tuples apart.
std::optional<PatternSubst> unify_patterns(const std::vector<Pattern>& a, const std::vector<Pattern>& b);

/// Renames every pattern variable `x` to `prefix + x`.
Pattern rename_pattern(const Pattern& p, const std::string& prefix);

}  // namespace upl
