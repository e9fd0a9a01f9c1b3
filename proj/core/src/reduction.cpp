#include "upl/reduction.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

namespace upl {

namespace {

bool match_into(const Pattern& p, const Term& m, Assignment& out) {
  if (p.is_var()) {
    out[p.name()] = m;
    return true;
  }
  Spine s = spine(m);
  if (!s.head.is_const() || s.head.name() != p.name() || s.args.size() != p.args().size()) return false;
  for (std::size_t i = 0; i < s.args.size(); ++i)
    if (!match_into(p.args()[i], s.args[i], out)) return false;
  return true;
}

void push_unique(std::vector<Term>& out, std::unordered_set<std::string>& seen, Term t) {
  if (seen.insert(alpha_key(t)).second) out.push_back(std::move(t));
}

void collect(const Term& m, const Signature& sig, std::vector<Term>& out, std::unordered_set<std::string>& seen) {
  for (auto& r : root_reducts(m, sig)) push_unique(out, seen, std::move(r));
  if (m.is_lam()) {
    std::vector<Term> inner;
    std::unordered_set<std::string> s;
    collect(m.body(), sig, inner, s);
    for (auto& b : inner) push_unique(out, seen, Term::lam(m.name(), b));
  } else if (m.is_app()) {
    std::vector<Term> inner;
    std::unordered_set<std::string> s;
    collect(m.fn(), sig, inner, s);
    for (auto& f : inner) push_unique(out, seen, Term::app(f, m.arg()));
    inner.clear();
    s.clear();
    collect(m.arg(), sig, inner, s);
    for (auto& a : inner) push_unique(out, seen, Term::app(m.fn(), a));
  }
}

std::optional<Term> first_root(const Term& m, const Signature& sig) {
  auto r = root_reducts(m, sig);
  if (r.empty()) return std::nullopt;
  return r.front();
}

}  // namespace

std::optional<Assignment> match_pattern(const Pattern& p, const Term& m) {
  Assignment a;
  if (!match_into(p, m, a)) return std::nullopt;
  return a;
}

std::optional<Assignment> match_patterns(const std::vector<Pattern>& ps, const std::vector<Term>& ms) {
  if (ps.size() != ms.size()) return std::nullopt;
  Assignment a;
  for (std::size_t i = 0; i < ps.size(); ++i)
    if (!match_into(ps[i], ms[i], a)) return std::nullopt;
  return a;
}

std::vector<Term> root_reducts(const Term& m, const Signature& sig) {
  std::vector<Term> out;
  if (m.is_app() && m.fn().is_lam()) out.push_back(substitute(m.fn().body(), m.fn().name(), m.arg()));
  if (!m.is_app() && !m.is_const()) return out;
  Spine s = spine(m);
  if (!s.head.is_const() || !sig.is_defined(s.head.name())) return out;
  if (static_cast<int>(s.args.size()) != *sig.arity(s.head.name())) return out;
  for (std::size_t idx : sig.rules_for(s.head.name())) {
    const auto& rule = sig.rules()[idx];
    if (auto sigma = match_patterns(rule.lhs, s.args)) {
      std::unordered_map<std::string, Term> sub(sigma->begin(), sigma->end());
      out.push_back(substitute(rule.rhs, sub));
    }
  }
  return out;
}

std::vector<Term> reducts(const Term& m, const Signature& sig) {
  std::vector<Term> out;
  std::unordered_set<std::string> seen;
  collect(m, sig, out, seen);
  return out;
}

bool is_normal(const Term& m, const Signature& sig) {
  return !step(m, sig, Strategy::LeftmostOutermost).has_value();
}

std::optional<Term> step(const Term& m, const Signature& sig, Strategy strategy) {
  if (strategy == Strategy::LeftmostOutermost) {
    if (auto r = first_root(m, sig)) return r;
    if (m.is_lam()) {
      if (auto b = step(m.body(), sig, strategy)) return Term::lam(m.name(), *b);
    } else if (m.is_app()) {
      if (auto f = step(m.fn(), sig, strategy)) return Term::app(*f, m.arg());
      if (auto a = step(m.arg(), sig, strategy)) return Term::app(m.fn(), *a);
    }
    return std::nullopt;
  }
  if (m.is_lam()) {
    if (auto b = step(m.body(), sig, strategy)) return Term::lam(m.name(), *b);
    return std::nullopt;
  }
  if (m.is_app()) {
    if (auto a = step(m.arg(), sig, strategy)) return Term::app(m.fn(), *a);
    if (auto f = step(m.fn(), sig, strategy)) return Term::app(*f, m.arg());
  }
  return first_root(m, sig);
}

NormalizeResult normalize(const Term& m, const Signature& sig, std::size_t fuel, Strategy strategy) {
  Term cur = m;
  for (std::size_t i = 0; i < fuel; ++i) {
    auto next = step(cur, sig, strategy);
    if (!next) return NormalForm{cur, i};
    cur = std::move(*next);
  }
  if (is_normal(cur, sig)) return NormalForm{cur, fuel};
  return FuelExhausted{cur};
}

SnVerdict check_sn(const Term& m, const Signature& sig, std::size_t fuel) {
  struct Node {
    Term term;
    std::vector<std::size_t> succ;
    bool done = false;
    std::size_t longest = 0;
  };
  std::vector<Node> nodes;
  std::unordered_map<std::string, std::size_t> index;

  auto intern = [&](const Term& t) -> std::pair<std::size_t, bool> {
    auto key = alpha_key(t);
    auto it = index.find(key);
    if (it != index.end()) return {it->second, false};
    index.emplace(std::move(key), nodes.size());
    nodes.push_back({t, {}, false, 0});
    return {nodes.size() - 1, true};
  };

  struct Frame {
    std::size_t node;
    std::size_t next_child = 0;
  };
  std::vector<Frame> stack;
  std::vector<bool> on_stack;

  auto expand = [&](std::size_t n) {
    for (auto& r : reducts(nodes[n].term, sig)) {
      auto [id, fresh] = intern(r);
      nodes[n].succ.push_back(id);
      (void)fresh;
    }
    on_stack.resize(nodes.size(), false);
  };

  intern(m);
  if (nodes.size() > fuel) return Unknown{nodes.size()};
  expand(0);
  if (nodes.size() > fuel) return Unknown{nodes.size()};
  stack.push_back({0});
  on_stack[0] = true;

  while (!stack.empty()) {
    Frame& f = stack.back();
    Node& node = nodes[f.node];
    if (f.next_child < node.succ.size()) {
      std::size_t c = node.succ[f.next_child++];
      if (on_stack[c]) {
        NotSN witness;
        for (const auto& fr : stack) witness.cycle.push_back(nodes[fr.node].term);
        witness.cycle.push_back(nodes[c].term);
        return witness;
      }
      if (nodes[c].done) continue;
      expand(c);
      if (nodes.size() > fuel) return Unknown{nodes.size()};
      on_stack[c] = true;
      stack.push_back({c});
      continue;
    }
    std::size_t best = 0;
    bool any = false;
    for (std::size_t c : node.succ) {
      best = std::max(best, nodes[c].longest);
      any = true;
    }
    node.longest = any ? best + 1 : 0;
    node.done = true;
    on_stack[f.node] = false;
    stack.pop_back();
  }

  SN out;
  out.longest_path = nodes[0].longest;
  for (const auto& n : nodes)
    if (n.succ.empty()) out.normal_forms.push_back(n.term);
  return out;
}

bool is_simple(const Term& m, const Signature& sig) {
  if (m.is_lam()) return false;
  Spine s = spine(m);
  if (!s.head.is_const()) return true;
  if (sig.is_constructor(s.head.name())) return false;
  if (auto ar = sig.arity(s.head.name())) return static_cast<int>(s.args.size()) >= *ar;
  return true;
}

}  // namespace upl
