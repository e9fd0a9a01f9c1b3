#pragma once

// Independent reference implementations used to cross-check the library.
// They are deliberately naive: raw syntax instead of normal forms,
// exhaustive search instead of direct constructions.

#include <map>
#include <optional>
#include <queue>
#include <string>
#include <unordered_map>
#include <vector>

#include "upl/nbhd.hpp"
#include "upl/reduction.hpp"
#include "upl/term.hpp"

namespace upl::testing {

inline void flatten(const Nbhd& u, std::vector<const Nbhd*>& out) {
  if (u.kind == Nbhd::Kind::Meet) {
    flatten(u.children[0], out);
    flatten(u.children[1], out);
  } else {
    out.push_back(&u);
  }
}

/// True when the conjuncts meet to nabla.
inline bool collapses(const std::vector<const Nbhd*>& atoms) {
  for (const auto* a : atoms) {
    if (a->kind == Nbhd::Kind::Nabla) return true;
    if (a->kind != atoms[0]->kind) return true;
    if (a->kind == Nbhd::Kind::Con && a->ctor != atoms[0]->ctor) return true;
  }
  return false;
}

inline Nbhd meet_of(const std::vector<Nbhd>& us) {
  Nbhd m = us[0];
  for (std::size_t i = 1; i < us.size(); ++i) m = Nbhd::meet(m, us[i]);
  return m;
}

/// Formal inclusion read off the inclusion rules, on raw syntax.
inline bool raw_leq(const Nbhd& u, const Nbhd& v) {
  if (v.kind == Nbhd::Kind::Meet) return raw_leq(u, v.children[0]) && raw_leq(u, v.children[1]);
  std::vector<const Nbhd*> as;
  flatten(u, as);
  if (collapses(as)) return true;
  switch (v.kind) {
    case Nbhd::Kind::Nabla:
      return false;
    case Nbhd::Kind::Con: {
      if (as[0]->kind != Nbhd::Kind::Con || as[0]->ctor != v.ctor) return false;
      for (std::size_t i = 0; i < v.children.size(); ++i) {
        std::vector<Nbhd> comp;
        for (const auto* a : as) comp.push_back(a->children[i]);
        if (!raw_leq(meet_of(comp), v.children[i])) return false;
      }
      return true;
    }
    case Nbhd::Kind::Arrow: {
      if (as[0]->kind != Nbhd::Kind::Arrow) return false;
      std::vector<Nbhd> cods;
      for (const auto* a : as)
        if (raw_leq(v.children[0], a->children[0])) cods.push_back(a->children[1]);
      return !cods.empty() && raw_leq(meet_of(cods), v.children[1]);
    }
    case Nbhd::Kind::Meet:
      break;
  }
  return false;
}

/// Largest J with u <= dom_j for j in J and meet(cod_J) <= v, found by
/// trying every subset. nullopt when no nonempty subset qualifies.
inline std::optional<std::vector<std::size_t>> brute_continuity(const std::vector<NfArrow>& arrows, const NbhdNF& u,
                                                                const NbhdNF& v) {
  std::optional<std::vector<std::size_t>> best;
  std::size_t n = arrows.size();
  for (std::size_t mask = 1; mask < (std::size_t{1} << n); ++mask) {
    std::vector<std::size_t> j;
    std::vector<NbhdNF> cods;
    bool ok = true;
    for (std::size_t i = 0; i < n && ok; ++i)
      if (mask & (std::size_t{1} << i)) {
        ok = leq(u, arrows[i].first);
        j.push_back(i);
        cods.push_back(arrows[i].second);
      }
    if (ok && leq(meet_all(cods), v) && (!best || j.size() > best->size())) best = j;
  }
  return best;
}

/// S^n 0 as an integer, or -1.
inline int numeral_value(const Term& t) {
  int n = 0;
  const Term* cur = &t;
  while (cur->is_app()) {
    if (!cur->fn().is_const() || cur->fn().name() != "S") return -1;
    ++n;
    cur = &cur->arg();
  }
  return cur->is_const() && cur->name() == "0" ? n : -1;
}

enum class SnOracle { SN, NotSN, TooBig };

/// Breadth-first exploration of the whole reduction graph, then Kahn's
/// algorithm: strongly normalising iff the graph is finite and acyclic.
/// Gives up past `limit` nodes or on a node larger than `max_size`.
inline SnOracle sn_oracle(const Term& m, const Signature& sig, std::size_t limit, std::size_t max_size = 400) {
  std::unordered_map<std::string, std::size_t> id;
  std::vector<std::vector<std::size_t>> edges;
  std::vector<Term> nodes;
  std::queue<std::size_t> todo;
  auto add = [&](const Term& t) {
    auto [it, fresh] = id.emplace(alpha_key(t), nodes.size());
    if (fresh) {
      nodes.push_back(t);
      edges.emplace_back();
      todo.push(it->second);
    }
    return it->second;
  };
  add(m);
  while (!todo.empty()) {
    if (nodes.size() > limit) return SnOracle::TooBig;
    std::size_t i = todo.front();
    todo.pop();
    if (nodes[i].size() > max_size) return SnOracle::TooBig;
    for (const auto& r : reducts(nodes[i], sig)) {
      std::size_t j = add(r);
      edges[i].push_back(j);
    }
  }
  std::vector<std::size_t> indeg(nodes.size(), 0);
  for (const auto& es : edges)
    for (auto j : es) ++indeg[j];
  std::vector<std::size_t> ready;
  for (std::size_t i = 0; i < nodes.size(); ++i)
    if (!indeg[i]) ready.push_back(i);
  std::size_t seen = 0;
  while (!ready.empty()) {
    auto i = ready.back();
    ready.pop_back();
    ++seen;
    for (auto j : edges[i])
      if (--indeg[j] == 0) ready.push_back(j);
  }
  return seen == nodes.size() ? SnOracle::SN : SnOracle::NotSN;
}

}  // namespace upl::testing
