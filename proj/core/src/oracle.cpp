#include "upl/oracle.hpp"

#include <algorithm>
#include <unordered_set>

#include "upl/reduction.hpp"

namespace upl {

namespace {

std::uint64_t pair_key(std::size_t a, std::size_t b) { return (static_cast<std::uint64_t>(a) << 32) ^ b; }

void require_sn(const Term& t, const Signature& sig, std::size_t fuel) {
  SnVerdict v = check_sn(t, sig, fuel);
  if (!is_sn(v))
    throw OracleError(OracleError::Kind::NotTerminating, "seed is not strongly normalising within fuel: " + print_term(t),
                      {t});
}

}  // namespace

std::optional<std::size_t> TermUniverse::find(const Term& t) const {
  auto it = index_.find(alpha_key(t));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::pair<std::size_t, bool> TermUniverse::intern(const Term& t, int level) {
  auto key = alpha_key(t);
  if (auto it = index_.find(key); it != index_.end()) return {it->second, false};
  std::size_t id = terms_.size();
  index_.emplace(std::move(key), id);
  terms_.push_back(t);
  level_.push_back(level);
  simple_.push_back(is_simple(t, *sig_));
  succ_.emplace_back();
  return {id, true};
}

void TermUniverse::add_closure(const std::vector<Term>& start, int level, std::size_t fuel) {
  std::vector<std::size_t> work;
  auto add = [&](const Term& t) -> std::size_t {
    auto [id, fresh] = intern(t, level);
    if (fresh) {
      work.push_back(id);
      if (terms_.size() > fuel)
        throw OracleError(OracleError::Kind::FuelExceeded,
                          "universe closure exceeded " + std::to_string(fuel) + " terms");
    }
    return id;
  };
  for (const auto& t : start) add(t);
  while (!work.empty()) {
    std::size_t i = work.back();
    work.pop_back();
    Term t = terms_[i];
    std::vector<std::size_t> next;
    for (const auto& r : reducts(t, *sig_)) next.push_back(add(r));
    succ_[i] = std::move(next);
    Spine s = spine(t);
    if (s.head.is_const() && sig_->is_constructor(s.head.name()))
      for (const auto& a : s.args) add(a);
  }
}

void TermUniverse::finish() {
  order_.clear();
  std::vector<char> state(terms_.size(), 0);
  for (std::size_t root = 0; root < terms_.size(); ++root) {
    if (state[root]) continue;
    std::vector<std::pair<std::size_t, std::size_t>> stack{{root, 0}};
    state[root] = 1;
    while (!stack.empty()) {
      auto& [n, k] = stack.back();
      if (k < succ_[n].size()) {
        std::size_t c = succ_[n][k++];
        if (!state[c]) {
          state[c] = 1;
          stack.emplace_back(c, 0);
        }
        continue;
      }
      order_.push_back(n);
      stack.pop_back();
    }
  }
  max_level_ = 0;
  for (int l : level_) max_level_ = std::max(max_level_, l);
  std::sort(divergent_.begin(), divergent_.end());
}

TermUniverse TermUniverse::build(const Signature& sig, const std::vector<Term>& seeds, std::size_t fuel) {
  TermUniverse u;
  u.sig_ = &sig;
  for (const auto& s : seeds) require_sn(s, sig, fuel);
  u.add_closure(seeds, 0, fuel);
  for (std::size_t i = 0; i < u.size(); ++i) u.pool_.push_back(i);
  u.finish();
  return u;
}

TermUniverse TermUniverse::build_layered(const Signature& sig, const std::vector<Term>& seeds,
                                         const std::vector<Term>& pool, int layers, std::size_t fuel,
                                         std::size_t sn_fuel) {
  TermUniverse u;
  u.sig_ = &sig;
  for (const auto& s : seeds) require_sn(s, sig, fuel);
  for (const auto& s : pool) require_sn(s, sig, fuel);
  u.add_closure(seeds, 0, fuel);
  if (pool.empty()) {
    for (std::size_t i = 0; i < u.size(); ++i) u.pool_.push_back(i);
  } else {
    std::size_t before = u.size();
    u.add_closure(pool, 0, fuel);
    std::unordered_set<std::size_t> in_pool;
    for (const auto& p : pool) in_pool.insert(*u.find(p));
    for (std::size_t i = before; i < u.size(); ++i) in_pool.insert(i);
    u.pool_.assign(in_pool.begin(), in_pool.end());
    std::sort(u.pool_.begin(), u.pool_.end());
  }
  std::unordered_set<std::uint64_t> tried;
  for (int layer = 1; layer <= layers; ++layer) {
    std::size_t n = u.size();
    std::vector<Term> apps;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t m : u.pool_) {
        if (!tried.insert(pair_key(i, m)).second) continue;
        Term t = Term::app(u.terms_[i], u.terms_[m]);
        if (u.find(t)) continue;
        if (is_sn(check_sn(t, sig, sn_fuel)))
          apps.push_back(t);
        else
          u.divergent_.emplace_back(i, m);
      }
    }
    u.add_closure(apps, layer, fuel);
  }
  u.finish();
  return u;
}

bool TermUniverse::known_divergent(std::size_t n, std::size_t m) const {
  return std::binary_search(divergent_.begin(), divergent_.end(), std::make_pair(n, m));
}

std::size_t CandidateSet::count() const { return static_cast<std::size_t>(std::count(member.begin(), member.end(), 1)); }

namespace {

bool succ_members(const TermUniverse& u, const std::vector<char>& member, std::size_t i) {
  for (std::size_t c : u.succ(i))
    if (!member[c]) return false;
  return true;
}

}  // namespace

CandidateSet r0_set(const TermUniverse& u) {
  CandidateSet x{&u, std::vector<char>(u.size(), 0), u.max_level()};
  for (std::size_t i : u.order()) x.member[i] = u.simple(i) && succ_members(u, x.member, i);
  return x;
}

CandidateSet con_candidate(const std::string& c, const std::vector<CandidateSet>& args, const TermUniverse& u) {
  CandidateSet x{&u, std::vector<char>(u.size(), 0), u.max_level()};
  for (const auto& a : args) x.decided = std::min(x.decided, a.decided);
  for (std::size_t i : u.order()) {
    bool in = false;
    Spine s = spine(u.term(i));
    if (s.head.is_const() && s.head.name() == c && s.args.size() == args.size()) {
      in = true;
      for (std::size_t j = 0; j < args.size() && in; ++j) {
        auto idx = u.find(s.args[j]);
        in = idx && args[j].contains(*idx);
      }
    } else if (u.simple(i)) {
      in = succ_members(u, x.member, i);
    }
    x.member[i] = in;
  }
  return x;
}

CandidateSet arrow_candidate(const CandidateSet& x, const CandidateSet& y, const TermUniverse& u) {
  CandidateSet out{&u, std::vector<char>(u.size(), 0), x.decided < 0 ? -1 : y.decided - 1};
  std::vector<std::size_t> args;
  for (std::size_t m : u.pool())
    if (x.contains(m)) args.push_back(m);
  std::vector<Term> missing;
  for (std::size_t n = 0; n < u.size(); ++n) {
    if (u.level(n) > out.decided) continue;
    bool in = true;
    for (std::size_t m : args) {
      Term t = Term::app(u.term(n), u.term(m));
      auto idx = u.find(t);
      if (!idx) {
        if (!u.known_divergent(n, m)) missing.push_back(t);
        in = false;
        continue;
      }
      if (!y.contains(*idx)) in = false;
    }
    out.member[n] = in;
  }
  if (!missing.empty())
    throw OracleError(OracleError::Kind::UniverseNotApplicationClosed,
                      std::to_string(missing.size()) + " applications missing from the universe, e.g. " +
                          print_term(missing.front()),
                      std::move(missing));
  return out;
}

CandidateSet intersect(const CandidateSet& a, const CandidateSet& b) {
  CandidateSet out{a.universe, a.member, std::min(a.decided, b.decided)};
  for (std::size_t i = 0; i < out.member.size(); ++i) out.member[i] = a.member[i] && b.member[i];
  return out;
}

const CandidateSet& RedSets::get(const NbhdNF& nf) {
  if (auto it = cache_.find(nf); it != cache_.end()) return it->second;
  CandidateSet x;
  switch (nf.cls()) {
    case NbhdClass::Nabla:
      x = r0_set(u_);
      break;
    case NbhdClass::Constructor: {
      std::vector<CandidateSet> args;
      for (const auto& a : nf.args()) args.push_back(get(a));
      x = con_candidate(nf.ctor(), args, u_);
      break;
    }
    case NbhdClass::Arrows: {
      bool first = true;
      for (const auto& [dom, cod] : nf.arrow_set()) {
        CandidateSet a = arrow_candidate(get(dom), get(cod), u_);
        x = first ? std::move(a) : intersect(x, a);
        first = false;
      }
      break;
    }
  }
  return cache_.emplace(nf, std::move(x)).first->second;
}

CandidateSet red_set(const NbhdNF& nf, const TermUniverse& u) {
  RedSets r(u);
  return r.get(nf);
}

CrReport cr_check(const CandidateSet& x) {
  CrReport rep;
  const TermUniverse& u = *x.universe;
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (!x.decides(i)) continue;
    if (x.contains(i) && !succ_members(u, x.member, i)) {
      rep.cr2 = false;
      rep.violations.push_back("CR2: " + print_term(u.term(i)) + " is a member but a reduct is not");
    }
    if (u.simple(i) && !x.contains(i) && succ_members(u, x.member, i)) {
      rep.cr3 = false;
      rep.violations.push_back("CR3: simple term " + print_term(u.term(i)) + " has all reducts inside but is not");
    }
  }
  return rep;
}

ProbeResult soundness_probe(const TypingContext& g, const Term& m, const NbhdNF& nf, RedSets& reds,
                            std::size_t per_var) {
  const TermUniverse& u = reds.universe();
  std::vector<std::pair<std::string, std::vector<std::size_t>>> choices;
  for (const auto& x : free_vars(m)) {
    const NbhdNF* t = g.lookup(x);
    if (!t) throw std::invalid_argument("soundness_probe: no type for " + x);
    const CandidateSet& c = reds.get(*t);
    std::vector<std::size_t> picks;
    for (std::size_t p : u.pool())
      if (c.contains(p) && picks.size() < per_var) picks.push_back(p);
    choices.emplace_back(x, std::move(picks));
  }
  const CandidateSet& target = reds.get(nf);
  ProbeResult res;
  std::vector<Term> missing;
  std::vector<std::size_t> pos(choices.size(), 0);
  for (const auto& [x, picks] : choices)
    if (picks.empty()) return res;
  while (true) {
    std::unordered_map<std::string, Term> sigma;
    for (std::size_t k = 0; k < choices.size(); ++k) sigma.emplace(choices[k].first, u.term(choices[k].second[pos[k]]));
    Term inst = substitute(m, sigma);
    ++res.instances;
    auto idx = u.find(inst);
    if (!idx || !target.decides(*idx)) {
      missing.push_back(inst);
    } else if (!target.contains(*idx)) {
      res.ok = false;
      res.violations.push_back(print_term(inst) + " is not in the candidate of " + print_nbhd(nf));
    }
    std::size_t k = 0;
    while (k < pos.size() && ++pos[k] == choices[k].second.size()) pos[k++] = 0;
    if (k == pos.size()) break;
  }
  if (!missing.empty())
    throw OracleError(OracleError::Kind::Coverage,
                      std::to_string(missing.size()) + " substitution instances not decided by the universe",
                      std::move(missing));
  return res;
}

ProbeResult soundness_probe(const TypingContext& g, const Term& m, const NbhdNF& nf, const TermUniverse& u,
                            std::size_t per_var) {
  RedSets reds(u);
  return soundness_probe(g, m, nf, reds, per_var);
}

ProbeResult soundness_probe_auto(const Signature& sig, const TypingContext& g, const Term& m, const NbhdNF& nf,
                                 std::vector<Term> seeds, const std::vector<Term>& pool, int layers,
                                 std::size_t fuel, int retries) {
  for (int attempt = 0;; ++attempt) {
    TermUniverse u = TermUniverse::build_layered(sig, seeds, pool, layers, fuel);
    try {
      return soundness_probe(g, m, nf, u);
    } catch (const OracleError& e) {
      if (e.kind() != OracleError::Kind::Coverage || attempt >= retries) throw;
      for (const auto& t : e.terms()) seeds.push_back(t);
    }
  }
}

}  // namespace upl
