#include <algorithm>
#include <functional>
#include <set>
#include <stdexcept>
#include <unordered_map>

#include "upl/typing.hpp"

namespace upl {

const NbhdNF* TypingContext::lookup(const std::string& x) const {
  auto i = index_of(x);
  return i ? &bindings_[*i].second : nullptr;
}

std::optional<std::size_t> TypingContext::index_of(const std::string& x) const {
  for (std::size_t i = bindings_.size(); i-- > 0;)
    if (bindings_[i].first == x) return i;
  return std::nullopt;
}

TypingContext TypingContext::extend(const std::string& x, const NbhdNF& u) const {
  TypingContext g = *this;
  g.push(x, u);
  return g;
}

bool operator==(const TypingContext& a, const TypingContext& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto& [x, u] = a.bindings_[i];
    const auto& [y, v] = b.bindings_[i];
    if (x != y || !eq(u, v)) return false;
  }
  return true;
}

std::string print_context(const TypingContext& g) {
  std::string out;
  for (const auto& [x, u] : g.bindings()) {
    if (!out.empty()) out += ", ";
    out += x + " : " + print_nbhd(u);
  }
  return out;
}

const char* rule_name(TypingRule r) {
  switch (r) {
    case TypingRule::Var: return "Var";
    case TypingRule::ConstructorIntro: return "ConstructorIntro";
    case TypingRule::LamIntro: return "LamIntro";
    case TypingRule::AppElim: return "AppElim";
    case TypingRule::MeetIntro: return "MeetIntro";
    case TypingRule::Subsume: return "Subsume";
    case TypingRule::DefinedMatch: return "DefinedMatch";
    case TypingRule::DefinedNoMatch: return "DefinedNoMatch";
  }
  return "?";
}

const char* outcome_name(Outcome o) {
  switch (o) {
    case Outcome::Valid: return "valid";
    case Outcome::Refuted: return "refuted";
    case Outcome::Unknown: return "unknown";
  }
  return "?";
}

NbhdNF arrow_chain(const std::vector<NbhdNF>& doms, const NbhdNF& cod) {
  NbhdNF acc = cod;
  for (std::size_t i = doms.size(); i-- > 0;) acc = NbhdNF::arrow(doms[i], acc);
  return acc;
}

TypingContext extend_rule_vars(const Signature& sig, const TypingContext& g, std::size_t rule,
                               const NbhdAssignment& w) {
  TypingContext out = g;
  for (const auto& x : sig.rules()[rule].vars()) {
    auto it = w.find(x);
    out.push(x, it == w.end() ? NbhdNF::nabla() : it->second);
  }
  return out;
}

namespace {

bool single_arrow(const NbhdNF& u) { return u.is_arrows() && u.arrow_set().size() == 1; }


std::string where(const Derivation& d) {
  return std::string(rule_name(d.rule)) + " node for " + print_term(d.subject) + " : " + print_nbhd(d.type);
}

std::optional<std::string> local_error(const Signature& sig, const Derivation& d) {
  auto premise_count = [&](std::size_t n) -> std::optional<std::string> {
    if (d.premises.size() != n) return where(d) + ": expected " + std::to_string(n) + " premises";
    for (const auto& p : d.premises)
      if (!p) return where(d) + ": null premise";
    return std::nullopt;
  };
  auto same_judgement_base = [&](const Derivation& p) -> std::optional<std::string> {
    if (!(p.ctx == d.ctx)) return where(d) + ": premise context differs";
    if (!alpha_eq(p.subject, d.subject)) return where(d) + ": premise subject differs";
    return std::nullopt;
  };

  switch (d.rule) {
    case TypingRule::Var: {
      if (auto e = premise_count(0)) return e;
      if (!d.subject.is_var()) return where(d) + ": subject is not a variable";
      const NbhdNF* u = d.ctx.lookup(d.subject.name());
      if (!u) return where(d) + ": variable not in context";
      if (!eq(*u, d.type)) return where(d) + ": type differs from context";
      return std::nullopt;
    }
    case TypingRule::ConstructorIntro: {
      if (auto e = premise_count(0)) return e;
      if (!d.subject.is_const() || !sig.is_constructor(d.subject.name())) return where(d) + ": not a constructor";
      const auto& c = d.subject.name();
      if (static_cast<int>(d.arg_types.size()) != *sig.arity(c)) return where(d) + ": wrong number of argument types";
      if (!eq(d.type, arrow_chain(d.arg_types, NbhdNF::con(c, d.arg_types)))) return where(d) + ": wrong type";
      return std::nullopt;
    }
    case TypingRule::LamIntro: {
      if (auto e = premise_count(1)) return e;
      if (!d.subject.is_lam()) return where(d) + ": subject is not an abstraction";
      if (!single_arrow(d.type)) return where(d) + ": type is not a single arrow";
      const auto& [dom, cod] = d.type.arrow_set().front();
      const Derivation& p = *d.premises[0];
      if (!(p.ctx == d.ctx.extend(d.subject.name(), dom))) return where(d) + ": premise context is not extended";
      if (!alpha_eq(p.subject, d.subject.body())) return where(d) + ": premise subject is not the body";
      if (!eq(p.type, cod)) return where(d) + ": premise type is not the codomain";
      return std::nullopt;
    }
    case TypingRule::AppElim: {
      if (auto e = premise_count(2)) return e;
      if (!d.subject.is_app()) return where(d) + ": subject is not an application";
      const Derivation& f = *d.premises[0];
      const Derivation& a = *d.premises[1];
      if (!(f.ctx == d.ctx) || !(a.ctx == d.ctx)) return where(d) + ": premise context differs";
      if (!alpha_eq(f.subject, d.subject.fn()) || !alpha_eq(a.subject, d.subject.arg()))
        return where(d) + ": premise subjects differ";
      if (!single_arrow(f.type)) return where(d) + ": function premise is not a single arrow";
      const auto& [dom, cod] = f.type.arrow_set().front();
      if (!eq(dom, a.type)) return where(d) + ": argument type is not the domain";
      if (!eq(cod, d.type)) return where(d) + ": conclusion is not the codomain";
      return std::nullopt;
    }
    case TypingRule::MeetIntro: {
      if (auto e = premise_count(2)) return e;
      for (const auto& p : d.premises)
        if (auto e = same_judgement_base(*p)) return e;
      if (!eq(d.type, meet(d.premises[0]->type, d.premises[1]->type))) return where(d) + ": type is not the meet";
      return std::nullopt;
    }
    case TypingRule::Subsume: {
      if (auto e = premise_count(1)) return e;
      if (auto e = same_judgement_base(*d.premises[0])) return e;
      if (!leq(d.premises[0]->type, d.type)) return where(d) + ": premise type is not included";
      return std::nullopt;
    }
    case TypingRule::DefinedMatch: {
      if (auto e = premise_count(1)) return e;
      if (!d.subject.is_const() || !sig.is_defined(d.subject.name())) return where(d) + ": not a defined constant";
      const auto& f = d.subject.name();
      if (static_cast<int>(d.arg_types.size()) != *sig.arity(f)) return where(d) + ": wrong number of argument types";
      if (!d.rewrite_rule || *d.rewrite_rule >= sig.rules().size()) return where(d) + ": missing rewrite rule";
      const auto& rule = sig.rules()[*d.rewrite_rule];
      if (rule.head != f) return where(d) + ": rule belongs to another constant";
      auto w = match_nbhds(rule.lhs, d.arg_types);
      if (!w) return where(d) + ": rule does not match the argument types";
      if (w->size() != d.assignment.size()) return where(d) + ": assignment has wrong domain";
      for (const auto& [x, u] : *w) {
        auto it = d.assignment.find(x);
        if (it == d.assignment.end() || !eq(it->second, u)) return where(d) + ": assignment differs for " + x;
      }
      const Derivation& p = *d.premises[0];
      if (!(p.ctx == extend_rule_vars(sig, d.ctx, *d.rewrite_rule, d.assignment)))
        return where(d) + ": premise context is not extended by the rule variables";
      if (!alpha_eq(p.subject, rule.rhs)) return where(d) + ": premise subject is not the rule rhs";
      if (!eq(d.type, arrow_chain(d.arg_types, p.type))) return where(d) + ": wrong type";
      return std::nullopt;
    }
    case TypingRule::DefinedNoMatch: {
      if (auto e = premise_count(0)) return e;
      if (!d.subject.is_const() || !sig.is_defined(d.subject.name())) return where(d) + ": not a defined constant";
      const auto& f = d.subject.name();
      if (static_cast<int>(d.arg_types.size()) != *sig.arity(f)) return where(d) + ": wrong number of argument types";
      for (std::size_t r : sig.rules_for(f))
        if (match_nbhds(sig.rules()[r].lhs, d.arg_types)) return where(d) + ": a rule matches";
      if (!eq(d.type, arrow_chain(d.arg_types, NbhdNF::nabla()))) return where(d) + ": wrong type";
      return std::nullopt;
    }
  }
  return where(d) + ": unknown rule";
}

}  // namespace

std::optional<std::string> derivation_error(const Signature& sig, const Derivation& d) {
  std::vector<const Derivation*> todo{&d};
  while (!todo.empty()) {
    const Derivation* n = todo.back();
    todo.pop_back();
    if (auto e = local_error(sig, *n)) return e;
    for (const auto& p : n->premises) todo.push_back(p.get());
  }
  return std::nullopt;
}

std::size_t derivation_size(const Derivation& d) {
  std::size_t n = 1;
  for (const auto& p : d.premises) n += derivation_size(*p);
  return n;
}

DerivPtr make_var(const TypingContext& g, const std::string& x) {
  const NbhdNF* u = g.lookup(x);
  if (!u) throw std::invalid_argument("unbound variable " + x);
  auto d = std::make_shared<Derivation>();
  d->rule = TypingRule::Var;
  d->ctx = g;
  d->subject = Term::var(x);
  d->type = *u;
  return d;
}

DerivPtr make_constructor(const TypingContext& g, const std::string& c, const std::vector<NbhdNF>& args) {
  auto d = std::make_shared<Derivation>();
  d->rule = TypingRule::ConstructorIntro;
  d->ctx = g;
  d->subject = Term::constant(c);
  d->type = arrow_chain(args, NbhdNF::con(c, args));
  d->arg_types = args;
  return d;
}

DerivPtr make_lam(const TypingContext& g, const Term& lam, const NbhdNF& dom, DerivPtr body) {
  auto d = std::make_shared<Derivation>();
  d->rule = TypingRule::LamIntro;
  d->ctx = g;
  d->subject = lam;
  d->type = NbhdNF::arrow(dom, body->type);
  d->premises = {std::move(body)};
  return d;
}

DerivPtr make_app(const TypingContext& g, const Term& app, DerivPtr fn, DerivPtr arg) {
  if (!single_arrow(fn->type)) throw std::logic_error("make_app: function type is not a single arrow");
  auto d = std::make_shared<Derivation>();
  d->rule = TypingRule::AppElim;
  d->ctx = g;
  d->subject = app;
  d->type = fn->type.arrow_set().front().second;
  d->premises = {std::move(fn), std::move(arg)};
  return d;
}

DerivPtr make_meet(DerivPtr a, DerivPtr b) {
  if (a->type == b->type) return a;
  auto d = std::make_shared<Derivation>();
  d->rule = TypingRule::MeetIntro;
  d->ctx = a->ctx;
  d->subject = a->subject;
  d->type = meet(a->type, b->type);
  d->premises = {std::move(a), std::move(b)};
  return d;
}

DerivPtr make_subsume(DerivPtr p, const NbhdNF& u) {
  if (p->type == u) return p;
  auto d = std::make_shared<Derivation>();
  d->rule = TypingRule::Subsume;
  d->ctx = p->ctx;
  d->subject = p->subject;
  d->type = u;
  d->premises = {std::move(p)};
  return d;
}

DerivPtr make_defined_match(const Signature& sig, const TypingContext& g, const std::string& f,
                            const std::vector<NbhdNF>& args, std::size_t rule, const NbhdAssignment& w, DerivPtr rhs) {
  (void)sig;
  auto d = std::make_shared<Derivation>();
  d->rule = TypingRule::DefinedMatch;
  d->ctx = g;
  d->subject = Term::constant(f);
  d->type = arrow_chain(args, rhs->type);
  d->arg_types = args;
  d->rewrite_rule = rule;
  d->assignment = w;
  d->premises = {std::move(rhs)};
  return d;
}

DerivPtr make_defined_nomatch(const TypingContext& g, const std::string& f, const std::vector<NbhdNF>& args) {
  auto d = std::make_shared<Derivation>();
  d->rule = TypingRule::DefinedNoMatch;
  d->ctx = g;
  d->subject = Term::constant(f);
  d->type = arrow_chain(args, NbhdNF::nabla());
  d->arg_types = args;
  return d;
}

DerivPtr rebase(const Signature& sig, const Derivation& d, const TypingContext& g) {
  auto out = std::make_shared<Derivation>(d);
  out->ctx = g;
  out->premises.clear();
  for (const auto& p : d.premises) {
    TypingContext pg = g;
    if (d.rule == TypingRule::LamIntro)
      pg = g.extend(d.subject.name(), d.type.arrow_set().front().first);
    else if (d.rule == TypingRule::DefinedMatch)
      pg = extend_rule_vars(sig, g, *d.rewrite_rule, d.assignment);
    out->premises.push_back(rebase(sig, *p, pg));
  }
  return out;
}

namespace {

struct FamilyMember {
  NbhdNF dom, cod;
  DerivPtr body;
};

void lambda_family(const DerivPtr& d, std::vector<FamilyMember>& out) {
  switch (d->rule) {
    case TypingRule::LamIntro: {
      const auto& [dom, cod] = d->type.arrow_set().front();
      out.push_back({dom, cod, d->premises[0]});
      return;
    }
    case TypingRule::MeetIntro:
      lambda_family(d->premises[0], out);
      lambda_family(d->premises[1], out);
      return;
    case TypingRule::Subsume:
      lambda_family(d->premises[0], out);
      return;
    default:
      throw std::invalid_argument(std::string("invert_lambda: unexpected rule ") + rule_name(d->rule) +
                                  " in abstraction derivation");
  }
}

/// Replaces the binding at `idx` by `u` in every context; variable leaves
/// that read that binding are re-derived from `u` and subsumed.
DerivPtr narrow(const DerivPtr& d, std::size_t idx, const NbhdNF& u) {
  auto out = std::make_shared<Derivation>(*d);
  out->ctx.bindings()[idx].second = u;
  if (d->rule == TypingRule::Var && d->ctx.index_of(d->subject.name()) == idx) {
    out->type = u;
    return make_subsume(out, d->type);
  }
  for (auto& p : out->premises) p = narrow(p, idx, u);
  return out;
}

}  // namespace

DerivPtr invert_lambda(const Signature& sig, const Derivation& d) {
  (void)sig;
  if (!d.subject.is_lam()) throw std::invalid_argument("invert_lambda: subject is not an abstraction");
  if (!single_arrow(d.type)) throw std::invalid_argument("invert_lambda: conclusion is not a single arrow");
  const auto& [u, v] = d.type.arrow_set().front();
  std::vector<FamilyMember> family;
  lambda_family(std::make_shared<Derivation>(d), family);
  std::vector<NfArrow> arrows;
  for (const auto& m : family) arrows.emplace_back(m.dom, m.cod);
  auto j = continuity_witness(arrows, u, v);
  std::size_t idx = d.ctx.size();
  DerivPtr acc;
  for (std::size_t i : j) {
    DerivPtr n = narrow(family[i].body, idx, u);
    acc = acc ? make_meet(acc, n) : n;
  }
  return make_subsume(acc, v);
}

AppInversion invert_app(const Signature& sig, const Derivation& d) {
  if (!d.subject.is_app()) throw std::invalid_argument("invert_app: subject is not an application");
  switch (d.rule) {
    case TypingRule::AppElim: {
      NbhdNF u = d.premises[0]->type.arrow_set().front().first;
      return {u, make_subsume(d.premises[0], NbhdNF::arrow(u, d.type)), make_subsume(d.premises[1], u)};
    }
    case TypingRule::Subsume: {
      auto inner = invert_app(sig, *d.premises[0]);
      return {inner.u, make_subsume(inner.fn, NbhdNF::arrow(inner.u, d.type)), inner.arg};
    }
    case TypingRule::MeetIntro: {
      auto a = invert_app(sig, *d.premises[0]);
      auto b = invert_app(sig, *d.premises[1]);
      NbhdNF u = meet(a.u, b.u);
      return {u, make_subsume(make_meet(a.fn, b.fn), NbhdNF::arrow(u, d.type)), make_meet(a.arg, b.arg)};
    }
    default:
      throw std::invalid_argument(std::string("invert_app: unexpected rule ") + rule_name(d.rule));
  }
}

namespace {

std::unordered_map<std::string, Term> live_terms(const std::map<std::string, DerivPtr>& parts,
                                                 const std::set<std::string>& live) {
  std::unordered_map<std::string, Term> out;
  for (const auto& x : live) out.emplace(x, parts.at(x)->subject);
  return out;
}

DerivPtr graft_rec(const DerivPtr& d, const std::map<std::string, DerivPtr>& parts, std::set<std::string> live) {
  if (live.empty()) return d;
  switch (d->rule) {
    case TypingRule::Var:
      if (live.count(d->subject.name())) return make_subsume(parts.at(d->subject.name()), d->type);
      return d;
    case TypingRule::ConstructorIntro:
    case TypingRule::DefinedMatch:
    case TypingRule::DefinedNoMatch:
      return d;
    default:
      break;
  }
  auto out = std::make_shared<Derivation>(*d);
  out->subject = substitute(d->subject, live_terms(parts, live));
  if (d->rule == TypingRule::LamIntro) live.erase(d->subject.name());
  for (auto& p : out->premises) p = graft_rec(p, parts, live);
  return out;
}

using Occurrence = std::function<DerivPtr(const std::string&, const DerivPtr&)>;

DerivPtr split_rec(const DerivPtr& d, const Term& n, std::set<std::string> live, const Occurrence& at) {
  if (n.is_var() && live.count(n.name())) return at(n.name(), d);
  auto fail = [&](const char* what) {
    return std::invalid_argument(std::string("split: ") + what + " at " + where(*d) + " against " + print_term(n));
  };
  auto out = std::make_shared<Derivation>(*d);
  out->subject = n;
  switch (d->rule) {
    case TypingRule::MeetIntro:
    case TypingRule::Subsume:
      for (auto& p : out->premises) p = split_rec(p, n, live, at);
      return out;
    case TypingRule::LamIntro:
      if (!n.is_lam() || !d->subject.is_lam() || n.name() != d->subject.name()) throw fail("abstraction mismatch");
      live.erase(n.name());
      out->premises[0] = split_rec(d->premises[0], n.body(), live, at);
      return out;
    case TypingRule::AppElim:
      if (!n.is_app()) throw fail("application mismatch");
      out->premises[0] = split_rec(d->premises[0], n.fn(), live, at);
      out->premises[1] = split_rec(d->premises[1], n.arg(), live, at);
      return out;
    default:
      if (!alpha_eq(d->subject, n)) throw fail("leaf mismatch");
      return d;
  }
}

}  // namespace

DerivPtr graft(const Signature& sig, const Derivation& d, const std::map<std::string, DerivPtr>& parts,
               const TypingContext& g) {
  std::set<std::string> live;
  for (const auto& [x, p] : parts) {
    if (!free_vars(p->subject).empty()) throw std::invalid_argument("graft: substituted term is not closed");
    live.insert(x);
  }
  return rebase(sig, *graft_rec(std::make_shared<Derivation>(d), parts, live), g);
}

Split split(const Signature& sig, const Derivation& d, const Term& n,
            const std::vector<std::pair<std::string, Term>>& sigma, const TypingContext& g,
            const std::map<std::string, DerivPtr>& fallback) {
  std::unordered_map<std::string, Term> sub;
  std::set<std::string> live;
  for (const auto& [x, m] : sigma) {
    if (!free_vars(m).empty()) throw std::invalid_argument("split: substituted term is not closed");
    sub.emplace(x, m);
    live.insert(x);
  }
  if (!alpha_eq(d.subject, substitute(n, sub))) throw std::invalid_argument("split: subject is not the instance");
  auto root = std::make_shared<Derivation>(d);

  std::map<std::string, DerivPtr> occ;
  split_rec(root, n, live, [&](const std::string& x, const DerivPtr& p) {
    auto& acc = occ[x];
    acc = acc ? make_meet(acc, p) : p;
    return p;
  });

  Split out;
  TypingContext body_ctx = g;
  for (const auto& [x, m] : sigma) {
    DerivPtr part;
    if (auto it = occ.find(x); it != occ.end())
      part = it->second;
    else if (auto f = fallback.find(x); f != fallback.end())
      part = f->second;
    else
      throw std::invalid_argument("split: no occurrence of " + x + " and no fallback");
    part = rebase(sig, *part, g);
    body_ctx.push(x, part->type);
    out.parts.push_back(part);
  }
  std::map<std::string, NbhdNF> w;
  for (std::size_t i = 0; i < sigma.size(); ++i) w.emplace(sigma[i].first, out.parts[i]->type);
  DerivPtr body = split_rec(root, n, live, [&](const std::string& x, const DerivPtr& p) {
    auto v = std::make_shared<Derivation>();
    v->rule = TypingRule::Var;
    v->subject = Term::var(x);
    v->type = w.at(x);
    return make_subsume(v, p->type);
  });
  out.body = rebase(sig, *body, body_ctx);
  return out;
}

}  // namespace upl
