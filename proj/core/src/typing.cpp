#include "upl/typing.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_map>

namespace upl {

namespace {

enum class Mode { Best, Any };
enum class Status { Found, Impossible, Unknown };

struct Res {
  Status status = Status::Unknown;
  DerivPtr d;
  std::string reason;

  static Res found(DerivPtr d) { return {Status::Found, std::move(d), {}}; }
  static Res impossible(std::string why) { return {Status::Impossible, nullptr, std::move(why)}; }
  static Res unknown(std::string why) { return {Status::Unknown, nullptr, std::move(why)}; }
};

CheckOutcome valid(DerivPtr d) { return {Outcome::Valid, std::move(d), {}}; }
CheckOutcome refuted(std::string why) { return {Outcome::Refuted, nullptr, std::move(why)}; }
CheckOutcome unknown(std::string why) { return {Outcome::Unknown, nullptr, std::move(why)}; }

const TypingContext kLocal;

/// Size of the syntax tree of u, saturating just past `limit`.
std::size_t tree_size(const NbhdNF& u, std::size_t limit) {
  std::size_t n = 1;
  if (u.is_con()) {
    for (const auto& a : u.args())
      if ((n += tree_size(a, limit)) > limit) return n;
  } else if (u.is_arrows()) {
    for (const auto& [d, c] : u.arrow_set())
      if ((n += tree_size(d, limit) + tree_size(c, limit)) > limit) return n;
  }
  return n;
}

/// Bounded proof search. Derivations are built with empty contexts and
/// rebased by the caller; memo keys use the context restricted to the
/// free variables of the subject, which is all a derivation can read.
class Search {
 public:
  Search(const Signature& sig, const TypingOptions& opt)
      : sig_(sig), opt_(opt), budget_(std::max(opt.depth, 0)) {
    universe_ = nbhd_universe(sig, std::max(opt.depth, 0), opt.universe_cap);
    domains_.assign(universe_.begin(), universe_.begin() + std::min(universe_.size(), opt.domain_cap));
  }

  const std::vector<NbhdNF>& universe() const { return universe_; }

  Res synth(const TypingContext& g, const Term& m, Mode mode) {
    std::string key = (mode == Mode::Best ? "B" : "A") + std::to_string(budget_) + "|" + ctx_key(g, m) + alpha_key(m);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    if (++steps_ > opt_.max_steps) return Res::unknown("search step limit reached");
    Res r;
    switch (m.kind()) {
      case TermKind::Var: {
        const NbhdNF* u = g.lookup(m.name());
        if (!u) throw std::invalid_argument("free variable '" + m.name() + "' has no type in the context");
        r = Res::found(var_node(m.name(), *u));
        break;
      }
      case TermKind::Lam:
        r = synth_lam(g, m, mode);
        break;
      default:
        r = synth_spine(g, m, mode);
        break;
    }
    memo_.emplace(std::move(key), r);
    return r;
  }

  CheckOutcome check(const TypingContext& g, const Term& m, const NbhdNF& u) {
    std::string key = std::to_string(budget_) + "|" + print_nbhd(u) + "|" + ctx_key(g, m) + alpha_key(m);
    if (auto it = check_memo_.find(key); it != check_memo_.end()) return it->second;
    if (++steps_ > opt_.max_steps) return unknown("search step limit reached");
    CheckOutcome c = check_uncached(g, m, u);
    check_memo_.emplace(std::move(key), c);
    return c;
  }

  /// Type of f at argument types `args`, as a derivation of f : args -> V.
  Res unfold(const std::string& f, const std::vector<NbhdNF>& args, Mode mode) {
    std::optional<std::size_t> hit;
    NbhdAssignment w;
    for (std::size_t r : sig_.rules_for(f)) {
      if (auto a = match_nbhds(sig_.rules()[r].lhs, args)) {
        hit = r;
        w = std::move(*a);
        break;
      }
    }
    if (!hit) return Res::found(make_defined_nomatch(kLocal, f, args));

    int measure = 0;
    for (const auto& a : args)
      if (a.is_con()) measure += a.complexity();
    auto& stack = active_[f];
    bool free = !stack.empty() && measure < stack.back();
    if (!free && budget_ <= 0) return Res::unknown("unfolding budget exhausted at " + f);
    if (!free) --budget_;
    stack.push_back(measure);

    const auto& rule = sig_.rules()[*hit];
    TypingContext rg;
    for (const auto& x : rule.vars()) rg.push(x, w.at(x));
    Res body = synth(rg, rule.rhs, mode);

    active_[f].pop_back();
    if (!free) ++budget_;
    if (body.status != Status::Found)
      return Res::unknown("right-hand side of " + f + " rule: " + (body.reason.empty() ? "no type" : body.reason));
    return Res::found(make_defined_match(sig_, kLocal, f, args, *hit, w, body.d));
  }

 private:
  static DerivPtr var_node(const std::string& x, const NbhdNF& u) {
    auto d = std::make_shared<Derivation>();
    d->rule = TypingRule::Var;
    d->subject = Term::var(x);
    d->type = u;
    return d;
  }

  static std::string ctx_key(const TypingContext& g, const Term& m) {
    std::string out;
    for (const auto& x : free_vars(m)) {
      out += x;
      out += ':';
      if (const NbhdNF* u = g.lookup(x)) out += print_nbhd(*u);
      out += ';';
    }
    return out;
  }

  /// Applies the derivation chain: head : T1 -> ... and argument
  /// derivations for args[from, to).
  static DerivPtr app_chain(DerivPtr head, Term subject, const std::vector<Term>& args,
                            const std::vector<DerivPtr>& arg_ds, std::size_t from) {
    for (std::size_t i = from; i < from + arg_ds.size(); ++i) {
      subject = Term::app(subject, args[i]);
      head = make_app(kLocal, subject, head, arg_ds[i - from]);
    }
    return head;
  }

  static Term prefix(const Spine& s, std::size_t n) {
    Term t = s.head;
    for (std::size_t i = 0; i < n; ++i) t = Term::app(t, s.args[i]);
    return t;
  }

  static DerivPtr meet_fold(DerivPtr acc, DerivPtr d) { return acc ? make_meet(std::move(acc), std::move(d)) : d; }

  /// Tuples over the domain list, at most `cap` of them.
  std::vector<std::vector<NbhdNF>> tuples(std::size_t r, Mode mode) const {
    std::vector<std::vector<NbhdNF>> out{{}};
    if (mode == Mode::Any) {
      out.front().assign(r, NbhdNF::nabla());
      return out;
    }
    for (std::size_t i = 0; i < r; ++i) {
      std::vector<std::vector<NbhdNF>> next;
      for (const auto& t : out)
        for (const auto& d : domains_) {
          if (next.size() >= opt_.closure_cap) break;
          auto u = t;
          u.push_back(d);
          next.push_back(std::move(u));
        }
      out = std::move(next);
    }
    return out;
  }

  Res synth_lam(const TypingContext& g, const Term& m, Mode mode) {
    const std::string& x = m.name();
    Res r0 = synth(g.extend(x, NbhdNF::nabla()), m.body(), mode);
    if (r0.status == Status::Impossible) return Res::impossible("body has no type even with " + x + " : !");
    DerivPtr acc;
    if (r0.status == Status::Found) acc = make_lam(kLocal, m, NbhdNF::nabla(), r0.d);
    if (mode == Mode::Any) return acc ? Res::found(acc) : Res::unknown(r0.reason);
    for (const auto& dom : domains_) {
      if (dom.is_nabla()) continue;
      if (acc && tree_size(acc->type, opt_.type_cap) > opt_.type_cap) break;
      Res r = synth(g.extend(x, dom), m.body(), Mode::Best);
      if (r.status == Status::Found) acc = meet_fold(acc, make_lam(kLocal, m, dom, r.d));
    }
    return acc ? Res::found(acc) : Res::unknown(r0.reason);
  }

  /// Best type if found, else any type.
  Res synth_arg(const TypingContext& g, const Term& m) {
    Res r = synth(g, m, Mode::Best);
    if (r.status == Status::Unknown) {
      Res a = synth(g, m, Mode::Any);
      if (a.status != Status::Unknown) return a;
    }
    return r;
  }

  Res synth_args(const TypingContext& g, const std::vector<Term>& args, std::size_t n, Mode mode,
                 std::vector<DerivPtr>& out) {
    for (std::size_t i = 0; i < n; ++i) {
      Res r = mode == Mode::Best ? synth_arg(g, args[i]) : synth(g, args[i], Mode::Any);
      if (r.status != Status::Found) return r;
      out.push_back(r.d);
    }
    return Res::found(nullptr);
  }

  static std::vector<NbhdNF> types_of(const std::vector<DerivPtr>& ds) {
    std::vector<NbhdNF> out;
    for (const auto& d : ds) out.push_back(d->type);
    return out;
  }

  Res synth_spine(const TypingContext& g, const Term& m, Mode mode) {
    Spine s = spine(m);
    const Term& h = s.head;
    if (h.is_var()) {
      const NbhdNF* u = g.lookup(h.name());
      if (!u) throw std::invalid_argument("free variable '" + h.name() + "' has no type in the context");
      return apply(g, var_node(h.name(), *u), s, 0, mode, true);
    }
    if (h.is_lam()) {
      // Each abstraction consumed by an argument takes the argument's type
      // as its domain.
      std::vector<DerivPtr> ads;
      std::vector<Term> lams;
      TypingContext inner = g;
      Term cur = h;
      bool all_nabla = true;
      while (cur.is_lam() && lams.size() < s.args.size()) {
        Res a = synth_arg(g, s.args[lams.size()]);
        if (a.status != Status::Found) return a;
        all_nabla = all_nabla && a.d->type.is_nabla();
        inner = inner.extend(cur.name(), a.d->type);
        ads.push_back(a.d);
        lams.push_back(cur);
        cur = cur.body();
      }
      Res b = synth(inner, cur, mode);
      if (b.status == Status::Impossible && !all_nabla) b = Res::unknown(b.reason);
      if (b.status != Status::Found) return b;
      DerivPtr fn = b.d;
      for (std::size_t j = lams.size(); j-- > 0;) fn = make_lam(kLocal, lams[j], ads[j]->type, fn);
      return apply(g, app_chain(fn, h, s.args, ads, 0), s, lams.size(), mode, false);
    }
    const std::string& c = h.name();
    auto ar = sig_.arity(c);
    if (!ar) throw std::invalid_argument("undeclared constant '" + c + "'");
    std::size_t k = static_cast<std::size_t>(*ar);
    std::size_t n = s.args.size();

    if (sig_.is_constructor(c)) {
      if (n > k)
        return Res::impossible("constructor " + c + " has arity " + std::to_string(k) + " but is applied to " +
                               std::to_string(n) + " arguments");
      std::vector<DerivPtr> ads;
      if (Res r = synth_args(g, s.args, n, mode, ads); r.status != Status::Found) return r;
      auto ts = types_of(ads);
      DerivPtr acc;
      for (const auto& extra : tuples(k - n, mode)) {
        auto all = ts;
        all.insert(all.end(), extra.begin(), extra.end());
        acc = meet_fold(acc, app_chain(make_constructor(kLocal, c, all), h, s.args, ads, 0));
      }
      return Res::found(acc);
    }

    std::size_t used = std::min(n, k);
    std::vector<DerivPtr> ads;
    if (Res r = synth_args(g, s.args, used, mode, ads); r.status != Status::Found) return r;
    auto ts = types_of(ads);
    if (n >= k) {
      Res f = unfold(c, ts, mode);
      if (f.status != Status::Found) return f;
      return apply(g, app_chain(f.d, h, s.args, ads, 0), s, k, mode, false);
    }
    DerivPtr acc;
    std::string why;
    for (const auto& extra : tuples(k - n, mode)) {
      auto all = ts;
      all.insert(all.end(), extra.begin(), extra.end());
      Res f = unfold(c, all, mode);
      if (f.status != Status::Found) {
        why = f.reason;
        continue;
      }
      acc = meet_fold(acc, app_chain(f.d, h, s.args, ads, 0));
      if (mode == Mode::Any) break;
    }
    return acc ? Res::found(acc) : Res::unknown(why);
  }

  /// Applies a head derivation to s.args[from..]. `exhaustive` says the
  /// head's types are exactly the supersets of its current type.
  Res apply(const TypingContext& g, DerivPtr head, const Spine& s, std::size_t from, Mode mode, bool exhaustive) {
    for (std::size_t i = from; i < s.args.size(); ++i) {
      const Term& arg = s.args[i];
      Term subject = prefix(s, i + 1);
      const NbhdNF h = head->type;
      if (h.is_nabla()) {
        Res a = synth(g, arg, Mode::Any);
        if (a.status != Status::Found) return a;
        head = make_subsume(head, NbhdNF::arrow(a.d->type, NbhdNF::nabla()));
        head = make_app(kLocal, subject, head, a.d);
      } else if (h.is_con()) {
        std::string why = "head of " + print_term(subject) + " has constructor type " + print_nbhd(h);
        return exhaustive ? Res::impossible(why) : Res::unknown(why);
      } else {
        DerivPtr dm;
        std::vector<NbhdNF> doms, cods;
        bool all_refuted = true;
        std::string why;
        for (const auto& [dom, cod] : h.arrow_set()) {
          CheckOutcome c = check(g, arg, dom);
          if (c.outcome == Outcome::Valid) {
            dm = meet_fold(dm, c.derivation);
            doms.push_back(dom);
            cods.push_back(cod);
            if (mode == Mode::Any) break;
          } else {
            if (c.outcome == Outcome::Unknown) all_refuted = false;
            why = c.reason;
          }
        }
        if (!dm) {
          std::string msg = "argument " + print_term(arg) + " fits no domain of " + print_nbhd(h);
          if (!why.empty()) msg += " (" + why + ")";
          return exhaustive && all_refuted ? Res::impossible(msg) : Res::unknown(msg);
        }
        NbhdNF target = NbhdNF::arrow(meet_all(doms), meet_all(cods));
        head = make_app(kLocal, subject, make_subsume(head, target), dm);
      }
      exhaustive = false;
    }
    return Res::found(head);
  }

  static bool arrow_paths(const NbhdNF& u, std::size_t r, std::vector<NbhdNF>& prefix,
                          std::vector<std::pair<std::vector<NbhdNF>, NbhdNF>>& out) {
    if (r == 0) {
      out.emplace_back(prefix, u);
      return true;
    }
    if (!u.is_arrows()) return false;
    for (const auto& [dom, cod] : u.arrow_set()) {
      prefix.push_back(dom);
      bool ok = arrow_paths(cod, r - 1, prefix, out);
      prefix.pop_back();
      if (!ok) return false;
    }
    return true;
  }

  CheckOutcome check_partial(const TypingContext& g, const Spine& s, const NbhdNF& u) {
    const std::string& c = s.head.name();
    std::size_t k = static_cast<std::size_t>(*sig_.arity(c));
    std::size_t n = s.args.size();
    std::vector<std::pair<std::vector<NbhdNF>, NbhdNF>> paths;
    std::vector<NbhdNF> pre;
    if (!arrow_paths(u, k - n, pre, paths))
      return refuted(c + " applied to " + std::to_string(n) + " of " + std::to_string(k) +
                     " arguments only has arrow types, not " + print_nbhd(u));
    Term subject = prefix(s, n);
    DerivPtr acc;

    if (sig_.is_constructor(c)) {
      for (const auto& [extra, target] : paths) {
        if (!target.is_con() || target.ctor() != c)
          return refuted("constructor " + c + " cannot produce " + print_nbhd(target));
        std::vector<DerivPtr> ads;
        for (std::size_t i = 0; i < n; ++i) {
          CheckOutcome a = check(g, s.args[i], target.args()[i]);
          if (a.outcome != Outcome::Valid) return a;
          ads.push_back(a.derivation);
        }
        for (std::size_t j = 0; j < extra.size(); ++j)
          if (!leq(extra[j], target.args()[n + j]))
            return refuted("argument type " + print_nbhd(extra[j]) + " is not below " +
                           print_nbhd(target.args()[n + j]));
        auto all = types_of(ads);
        all.insert(all.end(), extra.begin(), extra.end());
        DerivPtr d = app_chain(make_constructor(kLocal, c, all), s.head, s.args, ads, 0);
        acc = meet_fold(acc, make_subsume(d, arrow_chain(extra, target)));
      }
      return valid(make_subsume(acc, u));
    }

    std::vector<DerivPtr> ads;
    Res r = synth_args(g, s.args, n, Mode::Best, ads);
    if (r.status == Status::Impossible) return refuted(r.reason);
    if (r.status == Status::Unknown) return unknown(r.reason);
    auto ts = types_of(ads);
    for (const auto& [extra, target] : paths) {
      auto all = ts;
      all.insert(all.end(), extra.begin(), extra.end());
      Res f = unfold(c, all, Mode::Best);
      if (f.status != Status::Found) return unknown(f.reason);
      const NbhdNF& v = f.d->premises.empty() ? NbhdNF::nabla() : f.d->premises[0]->type;
      if (!leq(v, target)) return unknown(c + " result " + print_nbhd(v) + " is not below " + print_nbhd(target));
      DerivPtr d = app_chain(f.d, s.head, s.args, ads, 0);
      acc = meet_fold(acc, make_subsume(d, arrow_chain(extra, target)));
    }
    return valid(make_subsume(acc, u));
  }

  CheckOutcome check_uncached(const TypingContext& g, const Term& m, const NbhdNF& u) {
    if (m.is_var()) {
      const NbhdNF* t = g.lookup(m.name());
      if (!t) throw std::invalid_argument("free variable '" + m.name() + "' has no type in the context");
      if (leq(*t, u)) return valid(make_subsume(var_node(m.name(), *t), u));
      return refuted(m.name() + " : " + print_nbhd(*t) + " is not below " + print_nbhd(u));
    }
    if (m.is_lam()) {
      if (!u.is_arrows()) return refuted("an abstraction only has arrow types, not " + print_nbhd(u));
      DerivPtr acc;
      for (const auto& [dom, cod] : u.arrow_set()) {
        CheckOutcome b = check(g.extend(m.name(), dom), m.body(), cod);
        if (b.outcome != Outcome::Valid) return b;
        acc = meet_fold(acc, make_lam(kLocal, m, dom, b.derivation));
      }
      return valid(make_subsume(acc, u));
    }
    Spine s = spine(m);
    if (s.head.is_const()) {
      const std::string& c = s.head.name();
      auto ar = sig_.arity(c);
      if (!ar) throw std::invalid_argument("undeclared constant '" + c + "'");
      std::size_t k = static_cast<std::size_t>(*ar);
      std::size_t n = s.args.size();
      if (sig_.is_constructor(c)) {
        if (n > k) return refuted("constructor " + c + " is over-applied");
        if (n < k) return check_partial(g, s, u);
        if (!u.is_con() || u.ctor() != c)
          return refuted(print_term(m) + " only has types headed by " + c + ", not " + print_nbhd(u));
        std::vector<DerivPtr> ads;
        for (std::size_t i = 0; i < n; ++i) {
          CheckOutcome a = check(g, s.args[i], u.args()[i]);
          if (a.outcome != Outcome::Valid) return a;
          ads.push_back(a.derivation);
        }
        return valid(app_chain(make_constructor(kLocal, c, u.args()), s.head, s.args, ads, 0));
      }
      if (n < k) return check_partial(g, s, u);
    } else if (s.head.is_lam() && s.args.size() == 1) {
      Res a = synth_arg(g, s.args[0]);
      if (a.status == Status::Impossible) return refuted(a.reason);
      if (a.status == Status::Unknown) return unknown(a.reason);
      CheckOutcome b = check(g.extend(s.head.name(), a.d->type), s.head.body(), u);
      if (b.outcome == Outcome::Valid) {
        DerivPtr lam = make_lam(kLocal, s.head, a.d->type, b.derivation);
        return valid(make_app(kLocal, m, lam, a.d));
      }
      if (b.outcome == Outcome::Refuted && !a.d->type.is_nabla()) return unknown(b.reason);
      return b;
    }
    Res r = synth(g, m, Mode::Best);
    if (r.status == Status::Impossible) return refuted(r.reason);
    if (r.status == Status::Unknown) return unknown(r.reason);
    if (leq(r.d->type, u)) return valid(make_subsume(r.d, u));
    return unknown("found " + print_nbhd(r.d->type) + ", which is not below " + print_nbhd(u));
  }

  const Signature& sig_;
  TypingOptions opt_;
  int budget_;
  std::size_t steps_ = 0;
  std::vector<NbhdNF> universe_;
  std::vector<NbhdNF> domains_;
  std::unordered_map<std::string, std::vector<int>> active_;
  std::unordered_map<std::string, Res> memo_;
  std::unordered_map<std::string, CheckOutcome> check_memo_;

};

TypingOptions with_depth(int depth) {
  TypingOptions o;
  o.depth = depth;
  return o;
}

/// best, its supersets in the universe, then pairwise meets up to the cap.
std::vector<Typed> upward(const NbhdNF& best, const DerivPtr& d, const std::vector<NbhdNF>& universe,
                          std::size_t cap) {
  std::vector<Typed> out{{best, d}};
  auto present = [&](const NbhdNF& u) {
    return std::any_of(out.begin(), out.end(), [&](const Typed& t) { return eq(t.type, u); });
  };
  for (const auto& u : universe)
    if (out.size() < cap && leq(best, u) && !present(u)) out.push_back({u, make_subsume(d, u)});
  std::size_t base = out.size();
  for (std::size_t i = 1; i < base && out.size() < cap; ++i)
    for (std::size_t j = i + 1; j < base && out.size() < cap; ++j) {
      NbhdNF w = meet(out[i].type, out[j].type);
      if (!present(w)) out.push_back({w, make_meet(out[i].derivation, out[j].derivation)});
    }
  return out;
}

}  // namespace

CheckOutcome check_type(const Signature& sig, const TypingContext& g, const Term& m, const NbhdNF& u,
                        const TypingOptions& opt) {
  Search s(sig, opt);
  CheckOutcome c = s.check(g, m, u);
  if (c.outcome == Outcome::Valid) c.derivation = rebase(sig, *c.derivation, g);
  return c;
}

CheckOutcome check_type(const Signature& sig, const TypingContext& g, const Term& m, const NbhdNF& u, int depth) {
  return check_type(sig, g, m, u, with_depth(depth));
}

InferResult infer(const Signature& sig, const TypingContext& g, const Term& m, const TypingOptions& opt) {
  Search s(sig, opt);
  Res r = s.synth(g, m, Mode::Best);
  InferResult out;
  if (r.status == Status::Impossible) {
    out.outcome = Outcome::Refuted;
    return out;
  }
  if (r.status != Status::Found) return out;
  out.outcome = Outcome::Valid;
  DerivPtr d = rebase(sig, *r.d, g);
  out.best = Typed{d->type, d};
  out.types = upward(d->type, d, s.universe(), opt.closure_cap);
  return out;
}

InferResult infer(const Signature& sig, const TypingContext& g, const Term& m, int depth) {
  return infer(sig, g, m, with_depth(depth));
}

CheckOutcome find_any_type(const Signature& sig, const TypingContext& g, const Term& m, const TypingOptions& opt) {
  Search s(sig, opt);
  Res r = s.synth(g, m, Mode::Any);
  if (r.status == Status::Found) return valid(rebase(sig, *r.d, g));
  if (r.status == Status::Impossible) return refuted(r.reason);
  return unknown(r.reason);
}

std::vector<Typed> constant_type(const Signature& sig, const std::string& f, const std::vector<NbhdNF>& args,
                                 const TypingContext& g, const TypingOptions& opt) {
  if (!sig.is_defined(f)) throw std::invalid_argument("'" + f + "' is not a defined constant");
  if (static_cast<int>(args.size()) != *sig.arity(f))
    throw std::invalid_argument("constant_type: wrong number of argument types for " + f);
  Search s(sig, opt);
  Res r = s.unfold(f, args, Mode::Best);
  if (r.status != Status::Found) return {};
  DerivPtr d = rebase(sig, *r.d, g);
  NbhdNF v = d->rule == TypingRule::DefinedMatch ? d->premises[0]->type : NbhdNF::nabla();
  std::vector<Typed> out{{v, d}};
  if (d->rule == TypingRule::DefinedMatch)
    for (const auto& u : s.universe())
      if (leq(v, u) && !eq(u, v)) out.push_back({u, make_subsume(d, arrow_chain(args, u))});
  return out;
}

}  // namespace upl
