#include "upl/mltt.hpp"

#include <algorithm>
#include <sstream>

#include "upl/parser.hpp"
#include "upl/reduction.hpp"

namespace upl {

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Yes: return "yes";
    case Verdict::No: return "no";
    case Verdict::Unknown: return "unknown";
  }
  return "?";
}

void MlttEnv::declare(ConstDecl d) { decls_[d.name].push_back(std::move(d)); }

const std::vector<ConstDecl>& MlttEnv::declarations(const std::string& name) const {
  static const std::vector<ConstDecl> none;
  auto it = decls_.find(name);
  return it == decls_.end() ? none : it->second;
}

std::vector<std::string> MlttEnv::declared() const {
  std::vector<std::string> out;
  for (const auto& [k, v] : decls_) out.push_back(k);
  return out;
}

namespace {

std::optional<Term> nf(const Signature& sig, const Term& t, std::size_t fuel) {
  auto r = normalize(t, sig, fuel);
  if (auto* n = std::get_if<NormalForm>(&r)) return n->term;
  return std::nullopt;
}

bool is_meta(const std::string& x) { return !x.empty() && x[0] == '?'; }

bool has_meta(const Term& t) {
  for (const auto& x : free_vars(t))
    if (is_meta(x)) return true;
  return false;
}

using Solution = std::unordered_map<std::string, Term>;

Term apply_sol(const Term& t, const Solution& sol) { return sol.empty() ? t : substitute(t, sol); }

/// Pi view of a normal type: Fun D F.
struct PiView {
  Term dom;
  Term fam;
  Term cod(const Term& a) const { return fam.is_lam() ? substitute(fam.body(), fam.name(), a) : Term::app(fam, a); }
};

std::optional<PiView> as_pi(const Term& t) {
  Spine s = spine(t);
  if (s.head.is_const() && s.head.name() == "Fun" && s.args.size() == 2) return PiView{s.args[0], s.args[1]};
  return std::nullopt;
}

/// Matches a normal pattern with metavariables against a normal closed-of-
/// metas target. `local` holds binders introduced while descending.
class Matcher {
 public:
  Matcher(const Signature& sig, std::size_t fuel, Solution& sol) : sig_(sig), fuel_(fuel), sol_(sol) {}

  bool match(const Term& p, const Term& t) { return go(p, t); }

 private:
  bool go(const Term& p, const Term& t) {
    if (!has_meta(p)) return alpha_eq(p, t);
    Spine s = spine(p);
    if (s.head.is_var() && is_meta(s.head.name())) {
      if (auto it = sol_.find(s.head.name()); it != sol_.end()) {
        auto v = nf(sig_, Term::app(it->second, s.args), fuel_);
        return v && alpha_eq(*v, t);
      }
      if (auto r = miller(s, t)) return *r;
    }
    if (p.is_lam() && t.is_lam()) {
      std::string z = "%" + std::to_string(counter_++);
      local_.push_back(z);
      bool ok = go(substitute(p.body(), p.name(), Term::var(z)), substitute(t.body(), t.name(), Term::var(z)));
      local_.pop_back();
      return ok;
    }
    if (p.is_app() && t.is_app()) return go(p.fn(), t.fn()) && go(p.arg(), t.arg());
    return false;
  }

  // ?M x1 .. xk with distinct local xi: ?M := \x1 .. xk. t
  std::optional<bool> miller(const Spine& s, const Term& t) {
    std::vector<std::string> xs;
    for (const auto& a : s.args) {
      if (!a.is_var() || std::find(local_.begin(), local_.end(), a.name()) == local_.end()) return std::nullopt;
      if (std::find(xs.begin(), xs.end(), a.name()) != xs.end()) return std::nullopt;
      xs.push_back(a.name());
    }
    for (const auto& y : free_vars(t))
      if (std::find(local_.begin(), local_.end(), y) != local_.end() &&
          std::find(xs.begin(), xs.end(), y) == xs.end())
        return false;
    Term v = t;
    for (auto it = xs.rbegin(); it != xs.rend(); ++it) v = Term::lam(*it, v);
    sol_.emplace(s.head.name(), v);
    return true;
  }

  const Signature& sig_;
  std::size_t fuel_;
  Solution& sol_;
  std::vector<std::string> local_;
  int counter_ = 0;
};

}  // namespace

Verdict convertible(const Signature& sig, const Term& a, const Term& b, std::size_t fuel) {
  auto x = nf(sig, a, fuel);
  auto y = nf(sig, b, fuel);
  if (!x || !y) return Verdict::Unknown;
  return alpha_eq(*x, *y) ? Verdict::Yes : Verdict::No;
}

namespace {

struct Inferred {
  std::optional<Term> type;
  TTResult result;
};

class Checker {
 public:
  Checker(const MlttEnv& env, TTContext g) : env_(env), sig_(env.signature()), g_(std::move(g)) {}

  TTResult context_ok() {
    TTContext saved = std::move(g_);
    g_.clear();
    for (const auto& [x, a] : saved) {
      for (const auto& [y, b] : g_)
        if (y == x) return TTResult::no("variable " + x + " declared twice in the context");
      TTResult r = type(a);
      if (!r.ok()) {
        r.reason = "in the type of " + x + ": " + r.reason;
        return r;
      }
      g_.emplace_back(x, a);
    }
    return TTResult::yes();
  }

  TTResult type(const Term& a) {
    if (a.is_const() && a.name() == "U") return TTResult::yes();
    if (auto pi = as_pi(a); pi && pi->fam.is_lam()) {
      TTResult r = type(pi->dom);
      if (!r.ok()) return r;
      return under(pi->fam.name(), pi->dom, pi->fam.body(), [&](const Term& body) { return type(body); });
    }
    TTResult r = check(a, Term::constant("U"));
    if (!r.ok()) r.reason = print_term(a) + " is not a type: " + r.reason;
    return r;
  }

  TTResult check(const Term& m, const Term& a) {
    if (m.is_lam()) {
      auto an = norm(a);
      if (!an) return fuel_out(a);
      auto pi = as_pi(*an);
      if (!pi) return TTResult::no("abstraction " + print_term(m) + " checked against non-product " + print_term(*an));
      std::string z = fresh_for(m.name(), {m.body(), pi->fam});
      Term zv = Term::var(z);
      g_.emplace_back(z, pi->dom);
      TTResult r = check(substitute(m.body(), m.name(), zv), pi->cod(zv));
      g_.pop_back();
      return r;
    }
    if (m.is_app() && m.fn().is_lam()) {
      Inferred ia = infer(m.arg());
      if (!ia.type) return ia.result;
      std::string w = fresh_for("_", {a});
      return check(m.fn(), Term::app(Term::constant("Fun"), {*ia.type, Term::lam(w, a)}));
    }
    Spine s = spine(m);
    if (s.head.is_const() && !(s.head.name() == "Fun" && s.args.size() == 2)) return check_const_spine(s, a);
    Inferred i = infer(m);
    if (!i.type) return i.result;
    return conv(*i.type, a);
  }

  Inferred infer(const Term& m) {
    if (m.is_var()) {
      for (auto it = g_.rbegin(); it != g_.rend(); ++it)
        if (it->first == m.name()) return {it->second, TTResult::yes()};
      return {std::nullopt, TTResult::no("unbound variable " + m.name())};
    }
    if (m.is_lam()) return {std::nullopt, TTResult::unknown("cannot infer the type of " + print_term(m))};
    Spine s = spine(m);
    if (s.head.is_const() && s.head.name() == "Fun" && s.args.size() == 2) return infer_pi(s);
    if (s.head.is_const()) return infer_const_spine(s, std::nullopt);
    if (s.head.is_lam()) return {std::nullopt, TTResult::unknown("cannot infer the type of the redex " + print_term(m))};
    Inferred h = infer(s.head);
    if (!h.type) return h;
    return spine_type(*h.type, {}, {}, s.args, std::nullopt);
  }

 private:
  template <class F>
  TTResult under(const std::string& x, const Term& dom, const Term& body, F f) {
    std::string z = fresh_for(x, {body});
    g_.emplace_back(z, dom);
    TTResult r = f(substitute(body, x, Term::var(z)));
    g_.pop_back();
    return r;
  }

  std::string fresh_for(const std::string& x, std::initializer_list<Term> terms) {
    std::set<std::string> avoid;
    for (const auto& [y, t] : g_) {
      avoid.insert(y);
      for (const auto& v : free_vars(t)) avoid.insert(v);
    }
    for (const auto& t : terms)
      for (const auto& v : free_vars(t)) avoid.insert(v);
    if (!avoid.count(x) && !is_meta(x) && x != "_") return x;
    return fresh_name(x == "_" ? "x" : x, avoid);
  }

  std::optional<Term> norm(const Term& t) { return nf(sig_, t, env_.fuel()); }

  TTResult fuel_out(const Term& t) { return TTResult::unknown("normalisation of " + print_term(t) + " ran out of fuel"); }

  TTResult conv(const Term& have, const Term& want) {
    switch (convertible(sig_, have, want, env_.fuel())) {
      case Verdict::Yes: return TTResult::yes();
      case Verdict::No: return TTResult::no("type " + print_term(have) + " is not convertible to " + print_term(want));
      case Verdict::Unknown: break;
    }
    return TTResult::unknown("conversion of " + print_term(have) + " and " + print_term(want) + " ran out of fuel");
  }

  Inferred infer_pi(const Spine& s) {
    const Term U = Term::constant("U");
    TTResult r = check(s.args[0], U);
    if (!r.ok()) return {std::nullopt, r};
    const Term& fam = s.args[1];
    if (fam.is_lam())
      r = under(fam.name(), s.args[0], fam.body(), [&](const Term& b) { return check(b, U); });
    else
      r = check(fam, Term::app(Term::constant("Fun"), {s.args[0], Term::lam("_", U)}));
    if (!r.ok()) return {std::nullopt, r};
    return {U, TTResult::yes()};
  }

  TTResult check_const_spine(const Spine& s, const Term& a) {
    Inferred i = infer_const_spine(s, a);
    return i.type ? TTResult::yes() : i.result;
  }

  // Tries each declaration of the head in turn.
  Inferred infer_const_spine(const Spine& s, const std::optional<Term>& expected) {
    const std::string& c = s.head.name();
    const auto& decls = env_.declarations(c);
    if (decls.empty()) {
      if (c == "U") return {std::nullopt, TTResult::no("U is a type but not a term of any type")};
      return {std::nullopt, TTResult::no("constant " + c + " has no declared type")};
    }
    Inferred last{std::nullopt, TTResult::no("")};
    bool unknown = false;
    for (const auto& d : decls) {
      Inferred r = infer_with_decl(d, s, expected);
      if (r.type && (!expected || conv(*r.type, *expected).ok())) return r;
      if (r.type) r = {std::nullopt, conv(*r.type, *expected)};
      if (r.result.verdict == Verdict::Unknown) unknown = true;
      last = r;
    }
    if (unknown) last.result.verdict = Verdict::Unknown;
    return last;
  }

  Inferred infer_with_decl(const ConstDecl& d, const Spine& s, const std::optional<Term>& expected) {
    Solution ren;
    std::vector<std::string> metas;
    for (const auto& [x, t] : d.schematics) {
      std::string mv = "?" + x + "#" + std::to_string(meta_counter_++);
      ren.emplace(x, Term::var(mv));
      metas.push_back(mv);
    }
    Solution sol;
    for (const auto& [x, t] : s.head.instantiation()) {
      auto it = ren.find(x);
      if (it == ren.end())
        return {std::nullopt, TTResult::no(d.name + " has no schematic variable " + x)};
      sol.emplace(it->second.name(), t);
    }
    TTContext sch;
    for (const auto& [x, t] : d.schematics) sch.emplace_back(ren.at(x).name(), apply_sol(t, ren));
    return spine_type(apply_sol(d.type, ren), std::move(sol), std::move(sch), s.args, expected);
  }

  Inferred spine_type(const Term& head_type, Solution sol, const TTContext& sch, const std::vector<Term>& args,
                      const std::optional<Term>& expected);

  const MlttEnv& env_;
  const Signature& sig_;
  TTContext g_;
  int meta_counter_ = 0;
};

Inferred Checker::spine_type(const Term& head_type, Solution sol, const TTContext& sch, const std::vector<Term>& args,
                             const std::optional<Term>& expected) {
  auto fail = [](TTResult r) { return Inferred{std::nullopt, std::move(r)}; };
  auto unsolved = [&](const Term& t) {
    return fail(TTResult::unknown("cannot solve the schematic variables in " + print_term(t) +
                                  "; give them explicitly with c{A := T}"));
  };
  // Peel one product per argument.
  std::vector<Term> doms;
  Term t = head_type;
  for (const auto& a : args) {
    auto n = norm(apply_sol(t, sol));
    if (!n) return fail(fuel_out(t));
    auto pi = as_pi(*n);
    if (!pi) {
      Spine hs = spine(*n);
      if (hs.head.is_var() && is_meta(hs.head.name())) return unsolved(*n);
      return fail(TTResult::no("applied to " + print_term(a) + " but has non-product type " + print_term(*n)));
    }
    doms.push_back(pi->dom);
    t = pi->cod(a);
  }
  Matcher matcher(sig_, env_.fuel(), sol);
  if (expected && has_meta(apply_sol(t, sol))) {
    auto p = norm(apply_sol(t, sol));
    auto w = norm(*expected);
    if (p && w) matcher.match(*p, *w);
  }
  std::vector<std::size_t> deferred;
  for (std::size_t i = 0; i < args.size(); ++i) {
    Term d = apply_sol(doms[i], sol);
    if (!has_meta(d)) {
      TTResult r = check(args[i], d);
      if (!r.ok()) return fail(r);
      continue;
    }
    Inferred ia = infer(args[i]);
    auto p = norm(d);
    auto w = ia.type ? norm(*ia.type) : std::nullopt;
    if (!(p && w && matcher.match(*p, *w))) deferred.push_back(i);
  }
  for (std::size_t i : deferred) {
    Term d = apply_sol(doms[i], sol);
    if (has_meta(d)) return unsolved(d);
    TTResult r = check(args[i], d);
    if (!r.ok()) return fail(r);
  }
  // Each instantiation must inhabit its schematic type.
  for (const auto& [mv, ty] : sch) {
    auto it = sol.find(mv);
    if (it == sol.end()) return unsolved(Term::var(mv));
    TTResult r = check(it->second, apply_sol(ty, sol));
    if (!r.ok()) {
      r.reason = "schematic instantiation " + print_term(it->second) + ": " + r.reason;
      return fail(r);
    }
  }
  Term result = apply_sol(t, sol);
  if (has_meta(result)) return unsolved(result);
  return {result, TTResult::yes()};
}

}  // namespace

TTResult check_context(const MlttEnv& env, const TTContext& g) { return Checker(env, g).context_ok(); }

TTResult is_type(const MlttEnv& env, const TTContext& g, const Term& a) { return Checker(env, g).type(a); }

TTResult check_term(const MlttEnv& env, const TTContext& g, const Term& m, const Term& a) {
  return Checker(env, g).check(m, a);
}

InferOutcome infer_term(const MlttEnv& env, const TTContext& g, const Term& m) {
  Inferred i = Checker(env, g).infer(m);
  return {i.type, i.result};
}

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// "A, B : U, C : Nat -> U": names accumulate until a type closes them.
TTContext parse_schematics(const std::string& text, const Signature& sig, std::size_t line) {
  TTContext out;
  std::vector<std::string> pending;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    auto colon = part.find(':');
    std::string name = trim(colon == std::string::npos ? part : part.substr(0, colon));
    if (name.empty()) throw ParseError("empty schematic variable name", line, 1);
    pending.push_back(name);
    if (colon == std::string::npos) continue;
    Term ty = parse_term(part.substr(colon + 1), sig);
    for (auto& n : pending) out.emplace_back(std::move(n), ty);
    pending.clear();
  }
  if (!pending.empty()) throw ParseError("schematic variable " + pending.front() + " has no type", line, 1);
  return out;
}

// Splits "M : A" at the first colon where both sides parse.
std::pair<Term, Term> parse_judgement(const std::string& text, const Signature& sig, std::size_t line) {
  std::string err = "expected 'TERM : TYPE'";
  for (auto pos = text.find(':'); pos != std::string::npos; pos = text.find(':', pos + 1)) {
    if (pos + 1 < text.size() && text[pos + 1] == '=') continue;
    try {
      Term m = parse_term(text.substr(0, pos), sig);
      Term a = parse_term(text.substr(pos + 1), sig);
      return {m, a};
    } catch (const ParseError& e) {
      err = e.what();
    }
  }
  throw ParseError(err, line, 1);
}

}  // namespace

std::vector<Directive> parse_script(const std::string& text, const Signature& sig) {
  std::vector<Directive> out;
  std::istringstream in(text);
  std::string raw;
  std::size_t number = 0;
  while (std::getline(in, raw)) {
    ++number;
    if (auto h = raw.find('#'); h != std::string::npos) raw.erase(h);
    std::string body = trim(raw);
    if (body.empty()) continue;
    auto sp = body.find_first_of(" \t");
    std::string kw = body.substr(0, sp);
    std::string rest = sp == std::string::npos ? "" : trim(body.substr(sp));
    Directive d;
    d.line = number;
    d.text = body;
    if (kw == "constant") {
      d.kind = Directive::Kind::Constant;
      auto colon = rest.find(':');
      if (colon == std::string::npos) throw ParseError("expected 'constant NAME : TYPE'", number, 1);
      std::string name = trim(rest.substr(0, colon));
      if (!sig.is_constant(name)) throw ParseError("unknown constant '" + name + "'", number, 1);
      std::string ty = rest.substr(colon + 1);
      if (auto lb = ty.rfind('['); lb != std::string::npos) {
        auto rb = ty.find(']', lb);
        if (rb == std::string::npos || !trim(ty.substr(rb + 1)).empty())
          throw ParseError("unterminated schematic context", number, 1);
        d.schematics = parse_schematics(ty.substr(lb + 1, rb - lb - 1), sig, number);
        ty = ty.substr(0, lb);
      }
      d.subject = Term::constant(name);
      try {
        d.type = parse_term(ty, sig);
      } catch (const ParseError& e) {
        throw ParseError(e.what(), number, 1);
      }
    } else if (kw == "assume" || kw == "check" || kw == "reject") {
      d.kind = kw == "assume" ? Directive::Kind::Assume : kw == "check" ? Directive::Kind::Check : Directive::Kind::Reject;
      std::tie(d.subject, d.type) = parse_judgement(rest, sig, number);
      if (d.kind == Directive::Kind::Assume && !d.subject.is_var())
        throw ParseError("assume needs a variable name", number, 1);
    } else {
      throw ParseError("unknown directive '" + kw + "'", number, 1);
    }
    out.push_back(std::move(d));
  }
  return out;
}

bool ScriptReport::ok() const { return failures() == 0; }

std::size_t ScriptReport::failures() const {
  std::size_t n = 0;
  for (const auto& e : entries)
    if (!e.passed) ++n;
  return n;
}

ScriptReport run_script(const std::vector<Directive>& script, MlttEnv& env, TTContext* ctx) {
  ScriptReport rep;
  TTContext g;
  for (const auto& d : script) {
    DirectiveReport r{d, TTResult::yes(), false};
    switch (d.kind) {
      case Directive::Kind::Constant:
        r.result = check_context(env, d.schematics);
        if (r.result.ok()) r.result = is_type(env, d.schematics, d.type);
        env.declare({d.subject.name(), d.type, d.schematics});
        r.passed = r.result.ok();
        break;
      case Directive::Kind::Assume:
        r.result = is_type(env, g, d.type);
        for (const auto& [x, t] : g)
          if (x == d.subject.name()) r.result = TTResult::no("variable " + x + " assumed twice");
        if (r.result.ok()) g.emplace_back(d.subject.name(), d.type);
        r.passed = r.result.ok();
        break;
      case Directive::Kind::Check:
      case Directive::Kind::Reject:
        r.result = is_type(env, g, d.type);
        if (r.result.ok()) r.result = check_term(env, g, d.subject, d.type);
        r.passed = d.kind == Directive::Kind::Check ? r.result.ok() : r.result.verdict == Verdict::No;
        break;
    }
    rep.entries.push_back(std::move(r));
  }
  if (ctx) *ctx = std::move(g);
  return rep;
}

}  // namespace upl
