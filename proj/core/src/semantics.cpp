#include "upl/semantics.hpp"

#include <stdexcept>

#include "upl/reduction.hpp"

namespace upl {

bool same_filter(const FilterElem& a, const FilterElem& b) {
  if (a.is_bot() || b.is_bot()) return a.is_bot() && b.is_bot();
  return eq(*a.principal, *b.principal);
}

std::optional<NbhdNF> SemApprox::principal() const {
  if (generators.empty()) return std::nullopt;
  return meet_all(generators);
}

bool filter_member(const SemApprox& a, const NbhdNF& u) {
  auto p = a.principal();
  return p && leq(*p, u);
}

SemApprox apply_approx(const SemApprox& a, const SemApprox& b) {
  auto pa = a.principal();
  auto pb = b.principal();
  if (!pa || !pb) return SemApprox::bot();
  if (pa->is_nabla()) return SemApprox::top();
  if (!pa->is_arrows()) return SemApprox::bot();
  std::vector<NbhdNF> cods;
  for (const auto& [dom, cod] : pa->arrow_set())
    if (leq(*pb, dom)) cods.push_back(cod);
  if (cods.empty()) return SemApprox::bot();
  return SemApprox::up(meet_all(cods));
}

SemApprox sem_approx(const Signature& sig, const Term& m, const Env& rho, const TypingOptions& opt) {
  TypingContext g;
  for (const auto& x : free_vars(m)) {
    auto it = rho.find(x);
    if (it == rho.end()) throw std::invalid_argument("sem_approx: no environment entry for " + x);
    auto p = it->second.principal();
    if (!p) return SemApprox::bot();
    g.push(x, *p);
  }
  InferResult r = infer(sig, g, m, opt);
  SemApprox out;
  if (r.outcome != Outcome::Valid) return out;
  for (const auto& t : r.types) {
    out.generators.push_back(t.type);
    out.derivations.push_back(t.derivation);
  }
  return out;
}

SemApprox sem_approx(const Signature& sig, const Term& m, const Env& rho, int depth) {
  TypingOptions opt;
  opt.depth = depth;
  return sem_approx(sig, m, rho, opt);
}

Certificate certify_sn(const Signature& sig, const Term& m, const TypingOptions& opt) {
  TypingContext g;
  for (const auto& x : free_vars(m)) g.push(x, NbhdNF::nabla());
  Certificate c;
  CheckOutcome any = find_any_type(sig, g, m, opt);
  if (any.outcome == Outcome::Valid) {
    c.certified = true;
    c.type = any.derivation->type;
    c.derivation = any.derivation;
    c.search = Outcome::Valid;
    return c;
  }
  if (any.outcome == Outcome::Refuted) {
    c.search = Outcome::Refuted;
    c.reason = any.reason;
    return c;
  }
  InferResult r = infer(sig, g, m, opt);
  if (r.outcome == Outcome::Valid) {
    c.certified = true;
    c.type = r.best->type;
    c.derivation = r.best->derivation;
    c.search = Outcome::Valid;
    return c;
  }
  c.search = r.outcome;
  c.reason = any.reason;
  return c;
}

Certificate certify_sn(const Signature& sig, const Term& m, int depth) {
  TypingOptions opt;
  opt.depth = depth;
  return certify_sn(sig, m, opt);
}

const char* entry_status_name(EntryStatus s) {
  switch (s) {
    case EntryStatus::Holds: return "holds";
    case EntryStatus::DepthInsufficient: return "depth-insufficient";
    case EntryStatus::Violated: return "violated";
  }
  return "?";
}

std::size_t ModelReport::count(EntryStatus s) const {
  std::size_t n = 0;
  for (const auto& e : entries)
    if (e.status == s) ++n;
  return n;
}

namespace {

std::string show(const SemApprox& a) {
  auto p = a.principal();
  return p ? "up(" + print_nbhd(*p) + ")" : "bottom";
}

DerivPtr meet_of(const std::vector<DerivPtr>& ds) {
  DerivPtr acc;
  for (const auto& d : ds) acc = acc ? make_meet(acc, d) : d;
  return acc;
}

// |- p(W) : p instantiated by the parts' types, built from constructors.
DerivPtr pattern_derivation(const Pattern& p, const std::map<std::string, DerivPtr>& parts) {
  if (p.is_var()) return parts.at(p.name());
  std::vector<DerivPtr> subs;
  std::vector<NbhdNF> types;
  for (const auto& q : p.args()) {
    subs.push_back(pattern_derivation(q, parts));
    types.push_back(subs.back()->type);
  }
  const TypingContext g;
  Term t = Term::constant(p.name());
  DerivPtr acc = make_constructor(g, p.name(), types);
  for (const auto& s : subs) {
    t = Term::app(t, s->subject);
    acc = make_app(g, t, acc, s);
  }
  return acc;
}

constexpr std::size_t kTransported = 8;

// Generators of the reduct split into a derivation for the body under
// x : W and one for the argument at W, and generators of the body under
// x bound to the argument's approximation grafted back into the reduct.
EquationCheck substitution_check(const Signature& sig, const Term& lam, const Term& a, int depth) {
  const Env empty;
  const std::string& x = lam.name();
  Term reduct = substitute(lam.body(), x, a);
  SemApprox lhs = sem_approx(sig, reduct, empty, depth);
  SemApprox arg = sem_approx(sig, a, empty, depth);
  DerivPtr arg_d = meet_of(arg.derivations);
  std::map<std::string, DerivPtr> fallback;
  if (arg_d) fallback.emplace(x, arg_d);

  EquationCheck c{"substitution", true, {}};
  auto bad = [&](std::string why) {
    c.passed = false;
    c.detail = std::move(why);
    return c;
  };
  std::size_t n = 0;
  for (std::size_t i = 0; i < lhs.derivations.size() && i < kTransported; ++i, ++n) {
    const Derivation& d = *lhs.derivations[i];
    try {
      Split s = split(sig, d, lam.body(), {{x, a}}, {}, fallback);
      if (auto e = derivation_error(sig, *s.body)) return bad("split body: " + *e);
      if (auto e = derivation_error(sig, *s.parts[0])) return bad("split argument: " + *e);
      if (!eq(s.body->type, d.type)) return bad("split changed the type " + print_nbhd(d.type));
    } catch (const std::exception& e) {
      return bad(e.what());
    }
  }
  std::size_t m = 0;
  if (arg_d) {
    SemApprox rhs = sem_approx(sig, lam.body(), Env{{x, arg}}, depth);
    for (std::size_t i = 0; i < rhs.derivations.size() && i < kTransported; ++i, ++m) {
      const Derivation& d = *rhs.derivations[i];
      try {
        DerivPtr g = graft(sig, d, {{x, arg_d}}, {});
        if (auto e = derivation_error(sig, *g)) return bad("graft: " + *e);
        if (!alpha_eq(g->subject, reduct) || !eq(g->type, d.type)) return bad("graft produced the wrong judgement");
      } catch (const std::exception& e) {
        return bad(e.what());
      }
    }
  } else if (!lhs.is_bot() && occurs_free(x, lam.body())) {
    return bad("the argument has no type at this depth");
  }
  c.detail = std::to_string(n) + " reduct generators split, " + std::to_string(m) + " body generators grafted";
  return c;
}

// Left generators must lie in the right filter at depth + delta. Right
// generators are split along the rule's right-hand side and rebuilt as a
// DefinedMatch derivation of the redex.
EquationCheck iota_check(const Signature& sig, const Term& m, std::size_t rule_index, const Assignment& sigma_map,
                         int depth, int delta) {
  const Env empty;
  const RewriteRule& rule = sig.rules()[rule_index];
  std::vector<std::pair<std::string, Term>> sigma;
  for (const auto& v : rule.vars()) sigma.emplace_back(v, sigma_map.at(v));
  std::unordered_map<std::string, Term> sub(sigma.begin(), sigma.end());
  Term reduct = substitute(rule.rhs, sub);

  EquationCheck c{"iota-equation", true, {}};
  auto bad = [&](std::string why) {
    c.passed = false;
    c.detail = std::move(why);
    return c;
  };
  SemApprox lhs = sem_approx(sig, m, empty, depth);
  SemApprox rhs2 = sem_approx(sig, reduct, empty, depth + delta);
  for (const auto& u : lhs.generators)
    if (!filter_member(rhs2, u))
      return bad(print_nbhd(u) + " on the left is missing on the right at depth " + std::to_string(depth + delta));

  std::map<std::string, DerivPtr> fallback;
  for (const auto& [x, t] : sigma) {
    DerivPtr d = meet_of(sem_approx(sig, t, empty, depth).derivations);
    if (d) fallback.emplace(x, d);
  }
  SemApprox rhs = sem_approx(sig, reduct, empty, depth);
  std::size_t n = 0;
  for (std::size_t i = 0; i < rhs.derivations.size() && i < kTransported; ++i, ++n) {
    const Derivation& d = *rhs.derivations[i];
    try {
      Split s = split(sig, d, rule.rhs, sigma, {}, fallback);
      std::map<std::string, DerivPtr> parts;
      NbhdAssignment w;
      for (std::size_t j = 0; j < sigma.size(); ++j) {
        parts.emplace(sigma[j].first, s.parts[j]);
        w.emplace(sigma[j].first, s.parts[j]->type);
      }
      std::vector<DerivPtr> args;
      std::vector<NbhdNF> arg_types;
      for (const auto& p : rule.lhs) {
        args.push_back(pattern_derivation(p, parts));
        arg_types.push_back(args.back()->type);
      }
      const TypingContext g;
      DerivPtr body = rebase(sig, *s.body, extend_rule_vars(sig, g, rule_index, w));
      DerivPtr acc = make_defined_match(sig, g, rule.head, arg_types, rule_index, w, body);
      Term t = Term::constant(rule.head);
      for (const auto& a : args) {
        t = Term::app(t, a->subject);
        acc = make_app(g, t, acc, a);
      }
      if (auto e = derivation_error(sig, *acc)) return bad("rebuilt redex derivation: " + *e);
      if (!alpha_eq(acc->subject, m) || !eq(acc->type, d.type))
        return bad("rebuilt redex derivation has the wrong judgement");
    } catch (const std::exception& e) {
      return bad(e.what());
    }
  }
  c.detail = std::to_string(lhs.generators.size()) + " left generators found on the right, " + std::to_string(n) +
             " right generators rebuilt on the left";
  return c;
}

std::vector<EquationCheck> run_checks(const Signature& sig, const Term& m, int depth, int delta) {
  std::vector<EquationCheck> out;
  const Env empty;
  SemApprox whole = sem_approx(sig, m, empty, depth);

  if (m.is_app()) {
    const Term& n = m.fn();
    const Term& a = m.arg();
    SemApprox sn = sem_approx(sig, n, empty, depth);
    SemApprox sa = sem_approx(sig, a, empty, depth);
    SemApprox applied = apply_approx(sn, sa);
    SemApprox bigger = sem_approx(sig, m, empty, depth + delta);
    EquationCheck c{"application-soundness", true, {}};
    for (const auto& v : applied.generators)
      if (!filter_member(bigger, v)) {
        c.passed = false;
        c.detail = print_nbhd(v) + " from the applied approximations is not in " + show(bigger);
      }
    if (c.passed) c.detail = show(sn) + " applied to " + show(sa) + " = " + show(applied) + " within " + show(bigger);
    out.push_back(c);

    EquationCheck inv{"application-inversion", true, {}};
    std::size_t checked = 0;
    for (std::size_t i = 0; i < whole.derivations.size() && checked < 8; ++i, ++checked) {
      try {
        const Derivation& d = *whole.derivations[i];
        AppInversion w = invert_app(sig, d);
        bool ok = check_derivation(sig, *w.fn) && check_derivation(sig, *w.arg) &&
                  eq(w.fn->type, NbhdNF::arrow(w.u, d.type)) && eq(w.arg->type, w.u) &&
                  alpha_eq(w.fn->subject, n) && alpha_eq(w.arg->subject, a);
        if (!ok) {
          inv.passed = false;
          inv.detail = "inversion of the derivation for " + print_nbhd(d.type) + " is not valid";
        }
      } catch (const std::exception& e) {
        inv.passed = false;
        inv.detail = e.what();
      }
    }
    if (inv.passed) inv.detail = std::to_string(checked) + " generator derivations inverted";
    out.push_back(inv);

    if (n.is_lam()) out.push_back(substitution_check(sig, n, a, depth));
  }

  Spine s = spine(m);
  if (s.head.is_const() && sig.is_defined(s.head.name())) {
    std::size_t k = static_cast<std::size_t>(*sig.arity(s.head.name()));
    if (s.args.size() == k) {
      for (std::size_t r : sig.rules_for(s.head.name()))
        if (auto w = match_patterns(sig.rules()[r].lhs, s.args)) {
          out.push_back(iota_check(sig, m, r, *w, depth, delta));
          break;
        }
      std::vector<NbhdNF> args;
      bool all = true;
      for (const auto& x : s.args) {
        auto p = sem_approx(sig, x, empty, depth).principal();
        if (!p) {
          all = false;
          break;
        }
        args.push_back(*p);
      }
      bool matches = false;
      for (std::size_t r : sig.rules_for(s.head.name()))
        if (match_nbhds(sig.rules()[r].lhs, args)) matches = true;
      if (all && !matches) out.push_back({"no-match-top", whole.finite().is_top(), show(whole)});
    }
  }
  return out;
}

bool all_pass(const std::vector<EquationCheck>& cs) {
  for (const auto& c : cs)
    if (!c.passed) return false;
  return true;
}

}  // namespace

ModelReport model_equation_report(const Signature& sig, const std::vector<Term>& corpus, int depth, int delta) {
  ModelReport rep;
  rep.depth = depth;
  rep.delta = delta;
  for (const auto& m : corpus) {
    EntryReport e;
    e.term = m;
    e.checks = run_checks(sig, m, depth, delta);
    if (!all_pass(e.checks)) {
      auto retry = run_checks(sig, m, depth + 2 * delta, delta);
      e.status = all_pass(retry) ? EntryStatus::DepthInsufficient : EntryStatus::Violated;
    }
    rep.entries.push_back(std::move(e));
  }
  return rep;
}

}  // namespace upl
