#include "upl/signature.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace upl {

std::vector<std::string> RewriteRule::vars() const {
  std::vector<std::string> out;
  for (const auto& p : lhs) p.collect_vars(out);
  return out;
}

Term RewriteRule::lhs_term() const {
  std::vector<Term> args;
  for (const auto& p : lhs) args.push_back(p.to_term());
  return Term::app(Term::constant(head), args);
}

void Signature::add_constructor(const std::string& name, int arity) {
  if (arity < 0) throw std::invalid_argument("negative arity for " + name);
  if (ctor_arity_.count(name)) throw std::invalid_argument("constructor declared twice: " + name);
  ctor_arity_[name] = arity;
  ctors_.emplace_back(name, arity);
}

void Signature::add_defined(const std::string& name, int arity) {
  if (arity < 0) throw std::invalid_argument("negative arity for " + name);
  if (def_arity_.count(name)) throw std::invalid_argument("defined constant declared twice: " + name);
  def_arity_[name] = arity;
  defs_.emplace_back(name, arity);
}

void Signature::add_rule(RewriteRule rule) {
  by_head_[rule.head].push_back(rules_.size());
  rules_.push_back(std::move(rule));
}

std::optional<int> Signature::arity(const std::string& name) const {
  if (auto it = ctor_arity_.find(name); it != ctor_arity_.end()) return it->second;
  if (auto it = def_arity_.find(name); it != def_arity_.end()) return it->second;
  return std::nullopt;
}

std::vector<std::size_t> Signature::rules_for(const std::string& f) const {
  auto it = by_head_.find(f);
  return it == by_head_.end() ? std::vector<std::size_t>{} : it->second;
}

const char* violation_name(ViolationKind k) {
  switch (k) {
    case ViolationKind::NameClash: return "name-clash";
    case ViolationKind::UnknownHead: return "unknown-head";
    case ViolationKind::ArityMismatch: return "arity-mismatch";
    case ViolationKind::NonLinearLhs: return "non-linear-lhs";
    case ViolationKind::RhsFreeVariable: return "rhs-free-variable";
    case ViolationKind::Overlap: return "overlap";
  }
  return "?";
}

bool ValidationReport::has(ViolationKind k) const {
  return std::any_of(violations.begin(), violations.end(), [k](const Violation& v) { return v.kind == k; });
}

Pattern rename_pattern(const Pattern& p, const std::string& prefix) {
  if (p.is_var()) return Pattern::var(prefix + p.name());
  std::vector<Pattern> args;
  for (const auto& a : p.args()) args.push_back(rename_pattern(a, prefix));
  return Pattern::con(p.name(), std::move(args));
}

namespace {

Pattern apply_subst(const Pattern& p, const PatternSubst& s) {
  if (p.is_var()) {
    auto it = s.find(p.name());
    return it == s.end() ? p : apply_subst(it->second, s);
  }
  std::vector<Pattern> args;
  for (const auto& a : p.args()) args.push_back(apply_subst(a, s));
  return Pattern::con(p.name(), std::move(args));
}

bool occurs(const std::string& x, const Pattern& p, const PatternSubst& s) {
  if (p.is_var()) {
    if (p.name() == x) return true;
    auto it = s.find(p.name());
    return it != s.end() && occurs(x, it->second, s);
  }
  return std::any_of(p.args().begin(), p.args().end(), [&](const Pattern& a) { return occurs(x, a, s); });
}

bool unify_one(const Pattern& a0, const Pattern& b0, PatternSubst& s) {
  Pattern a = a0, b = b0;
  while (a.is_var() && s.count(a.name())) a = s.at(a.name());
  while (b.is_var() && s.count(b.name())) b = s.at(b.name());
  if (a.is_var() && b.is_var() && a.name() == b.name()) return true;
  if (a.is_var()) {
    if (occurs(a.name(), b, s)) return false;
    s[a.name()] = b;
    return true;
  }
  if (b.is_var()) return unify_one(b, a, s);
  if (a.name() != b.name() || a.args().size() != b.args().size()) return false;
  for (std::size_t i = 0; i < a.args().size(); ++i)
    if (!unify_one(a.args()[i], b.args()[i], s)) return false;
  return true;
}

void check_pattern_arity(const Signature& sig, const Pattern& p, std::size_t rule_idx, ValidationReport& rep) {
  if (p.is_var()) {
    if (sig.is_constant(p.name()))
      rep.violations.push_back({ViolationKind::NameClash,
                                "pattern variable '" + p.name() + "' shadows a constant", {rule_idx}});
    return;
  }
  if (!sig.is_constructor(p.name())) {
    rep.violations.push_back(
        {ViolationKind::UnknownHead, "pattern head '" + p.name() + "' is not a constructor", {rule_idx}});
  } else if (static_cast<int>(p.args().size()) != *sig.arity(p.name())) {
    rep.violations.push_back({ViolationKind::ArityMismatch,
                              "constructor '" + p.name() + "' expects " + std::to_string(*sig.arity(p.name())) +
                                  " arguments in pattern, got " + std::to_string(p.args().size()),
                              {rule_idx}});
  }
  for (const auto& a : p.args()) check_pattern_arity(sig, a, rule_idx, rep);
}

}  // namespace

std::optional<PatternSubst> unify_patterns(const std::vector<Pattern>& a, const std::vector<Pattern>& b) {
  if (a.size() != b.size()) return std::nullopt;
  PatternSubst s;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!unify_one(a[i], b[i], s)) return std::nullopt;
  PatternSubst solved;
  for (const auto& [k, v] : s) solved.emplace(k, apply_subst(v, s));
  return solved;
}

ValidationReport validate_signature(const Signature& sig) {
  ValidationReport rep;
  for (const auto& [name, ar] : sig.constructors())
    if (sig.is_defined(name))
      rep.violations.push_back({ViolationKind::NameClash, "'" + name + "' is both constructor and defined", {}});

  const auto& rules = sig.rules();
  for (std::size_t i = 0; i < rules.size(); ++i) {
    const auto& r = rules[i];
    if (!sig.is_defined(r.head)) {
      rep.violations.push_back({ViolationKind::UnknownHead, "rule head '" + r.head + "' is not a defined constant", {i}});
    } else if (static_cast<int>(r.lhs.size()) != *sig.arity(r.head)) {
      rep.violations.push_back({ViolationKind::ArityMismatch,
                                "'" + r.head + "' has arity " + std::to_string(*sig.arity(r.head)) + " but rule has " +
                                    std::to_string(r.lhs.size()) + " patterns",
                                {i}});
    }
    for (const auto& p : r.lhs) check_pattern_arity(sig, p, i, rep);

    auto vars = r.vars();
    std::set<std::string> seen;
    for (const auto& v : vars) {
      if (!seen.insert(v).second)
        rep.violations.push_back({ViolationKind::NonLinearLhs, "variable '" + v + "' occurs twice in lhs of rule for '" +
                                                                   r.head + "'",
                                  {i}});
    }
    for (const auto& v : free_vars(r.rhs))
      if (!seen.count(v))
        rep.violations.push_back(
            {ViolationKind::RhsFreeVariable, "rhs variable '" + v + "' not bound by lhs of rule for '" + r.head + "'", {i}});
  }

  for (std::size_t i = 0; i < rules.size(); ++i) {
    for (std::size_t j = i + 1; j < rules.size(); ++j) {
      if (rules[i].head != rules[j].head || rules[i].lhs.size() != rules[j].lhs.size()) continue;
      std::vector<Pattern> a, b;
      for (const auto& p : rules[i].lhs) a.push_back(rename_pattern(p, "1."));
      for (const auto& p : rules[j].lhs) b.push_back(rename_pattern(p, "2."));
      if (unify_patterns(a, b))
        rep.violations.push_back(
            {ViolationKind::Overlap, "rules for '" + rules[i].head + "' have unifiable left-hand sides", {i, j}});
    }
  }
  return rep;
}

}  // namespace upl
