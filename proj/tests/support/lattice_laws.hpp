#pragma once

// Lattice laws for normal-form neighbourhoods, checked on seeded random
// samples. Every law is checked against the library's leq/meet/eq and,
// where it applies, against the raw-syntax oracle.

#include <map>
#include <string>
#include <vector>

#include "support/generators.hpp"
#include "support/oracles.hpp"
#include "upl/nbhd.hpp"

namespace upl::testing {

struct LawReport {
  std::size_t samples = 0;
  std::map<std::string, std::size_t> checked;
  std::vector<std::string> failures;

  bool ok() const { return failures.empty(); }
};

class LawChecker {
 public:
  LawChecker(const Signature& sig, int complexity) : sig_(sig), complexity_(complexity) {
    for (const auto& [c, k] : sig.constructors()) ctors_.emplace_back(c, k);
  }

  void run(Rng& rng, std::size_t n, LawReport& rep) {
    for (std::size_t i = 0; i < n; ++i) {
      NbhdNF a = random_nbhd(rng, sig_, complexity_);
      NbhdNF b = random_nbhd(rng, sig_, complexity_);
      NbhdNF c = random_nbhd(rng, sig_, complexity_);
      // Bias towards related pairs so that inclusions are not all false.
      if (coin(rng, 0.3)) b = meet(a, b);
      ++rep.samples;
      axiom_laws(rng, a, b, c, rep);
      poset_laws(a, b, c, rep);
      glb_laws(a, b, c, rep);
      partition(a, b, rep);
      continuity(rng, rep);
    }
  }

 private:
  void law(LawReport& rep, const char* name, bool ok, const std::string& what) {
    ++rep.checked[name];
    if (!ok && rep.failures.size() < 20) rep.failures.push_back(std::string(name) + ": " + what);
  }

  static std::string show(const NbhdNF& u) { return print_nbhd(u); }

  NbhdNF random_con(Rng& rng, const std::string& c, int k) {
    std::vector<NbhdNF> args;
    for (int i = 0; i < k; ++i) args.push_back(random_nbhd(rng, sig_, complexity_ - 1));
    return NbhdNF::con(c, args);
  }

  void axiom_laws(Rng& rng, const NbhdNF& a, const NbhdNF& b, const NbhdNF& c, LawReport& rep) {
    law(rep, "nabla-absorbs", eq(meet(NbhdNF::nabla(), a), NbhdNF::nabla()) && eq(meet(a, NbhdNF::nabla()), NbhdNF::nabla()),
        show(a));

    const auto& [c1, k1] = ctors_[pick(rng, ctors_.size())];
    const auto& [c2, k2] = ctors_[pick(rng, ctors_.size())];
    NbhdNF x = random_con(rng, c1, k1);
    NbhdNF y = random_con(rng, c2, k2);
    if (c1 != c2) law(rep, "distinct-constructors", eq(meet(x, y), NbhdNF::nabla()), show(x) + " & " + show(y));

    NbhdNF arr = NbhdNF::arrow(b, c);
    law(rep, "constructor-arrow", eq(meet(x, arr), NbhdNF::nabla()) && eq(meet(arr, x), NbhdNF::nabla()),
        show(x) + " & " + show(arr));

    NbhdNF lhs = meet(NbhdNF::arrow(a, b), NbhdNF::arrow(a, c));
    law(rep, "arrow-codomain-meet", eq(lhs, NbhdNF::arrow(a, meet(b, c))), show(lhs));

    NbhdNF x2 = random_con(rng, c1, k1);
    std::vector<NbhdNF> comps;
    for (int i = 0; i < k1; ++i) comps.push_back(meet(x.args()[i], x2.args()[i]));
    law(rep, "constructor-componentwise", eq(meet(x, x2), NbhdNF::con(c1, comps)), show(x) + " & " + show(x2));

    // Inclusion rules.
    std::vector<NbhdNF> big;
    for (int i = 0; i < k1; ++i) big.push_back(meet(x.args()[i], a));
    law(rep, "constructor-monotone", leq(NbhdNF::con(c1, big), x), show(x));
    law(rep, "arrow-variance", leq(NbhdNF::arrow(a, meet(b, c)), NbhdNF::arrow(meet(a, c), b)),
        show(a) + ", " + show(b) + ", " + show(c));
  }

  void poset_laws(const NbhdNF& a, const NbhdNF& b, const NbhdNF& c, LawReport& rep) {
    law(rep, "reflexive", leq(a, a), show(a));
    if (leq(a, b) && leq(b, c)) law(rep, "transitive", leq(a, c), show(a) + " <= " + show(b) + " <= " + show(c));
    if (leq(a, b) && leq(b, a)) {
      // Formally equal elements are interchangeable.
      law(rep, "antisymmetric", leq(a, c) == leq(b, c) && leq(c, a) == leq(c, b) && eq(meet(a, c), meet(b, c)),
          show(a) + " = " + show(b));
    }
    law(rep, "least-nabla", leq(NbhdNF::nabla(), a), show(a));
    law(rep, "raw-oracle", leq(a, b) == raw_leq(embed(a), embed(b)), show(a) + " <= " + show(b));
    law(rep, "normalize-embed", eq(normalize_nbhd(embed(a)), a), show(a));
  }

  void glb_laws(const NbhdNF& a, const NbhdNF& b, const NbhdNF& c, LawReport& rep) {
    NbhdNF m = meet(a, b);
    law(rep, "meet-lower", leq(m, a) && leq(m, b), show(a) + " & " + show(b));
    if (leq(c, a) && leq(c, b)) law(rep, "meet-greatest", leq(c, m), show(c) + " below " + show(m));
    law(rep, "meet-commutative", eq(m, meet(b, a)), show(m));
    law(rep, "meet-associative", eq(meet(m, c), meet(a, meet(b, c))), show(a) + ", " + show(b) + ", " + show(c));
    law(rep, "meet-idempotent", eq(meet(a, a), a), show(a));
    law(rep, "leq-iff-meet", leq(a, b) == eq(meet(a, b), a), show(a) + ", " + show(b));
  }

  void partition(const NbhdNF& a, const NbhdNF& b, LawReport& rep) {
    int classes = int(a.is_nabla()) + int(a.is_con()) + int(a.is_arrows());
    law(rep, "partition-exclusive", classes == 1, show(a));
    if (eq(a, b)) law(rep, "partition-stable", a.cls() == b.cls(), show(a) + " = " + show(b));
    if (a.is_con() && b.is_con()) {
      if (a.ctor() != b.ctor()) {
        law(rep, "partition-distinct-heads", !eq(a, b), show(a) + ", " + show(b));
      } else {
        bool comps = true;
        for (std::size_t i = 0; i < a.args().size(); ++i) comps = comps && eq(a.args()[i], b.args()[i]);
        law(rep, "partition-injective", eq(a, b) == comps, show(a) + ", " + show(b));
      }
    }
  }

  void continuity(Rng& rng, LawReport& rep) {
    NbhdNF x = random_arrows(rng, sig_, complexity_, 4);
    const auto& arrows = x.arrow_set();
    NbhdNF u, v;
    if (coin(rng)) {
      // Build u -> v above x from a random nonempty subset.
      std::vector<NbhdNF> doms, cods;
      for (const auto& [d, r] : arrows)
        if (coin(rng) || doms.empty()) {
          doms.push_back(d);
          cods.push_back(r);
        }
      u = coin(rng) ? meet_all(doms) : meet(meet_all(doms), random_nbhd(rng, sig_, complexity_ - 1));
      v = cods[pick(rng, cods.size())];
    } else {
      u = random_nbhd(rng, sig_, complexity_ - 1);
      v = random_nbhd(rng, sig_, complexity_ - 1);
    }
    bool below = leq(x, NbhdNF::arrow(u, v));
    auto brute = brute_continuity(arrows, u, v);
    law(rep, "continuity-brute-agrees", below == brute.has_value(), show(x) + " <= " + show(u) + " -> " + show(v));
    if (!below) return;
    std::vector<std::size_t> j = continuity_witness(arrows, u, v);
    std::vector<std::size_t> expect;
    std::vector<NbhdNF> cods;
    for (std::size_t i = 0; i < arrows.size(); ++i)
      if (leq(u, arrows[i].first)) {
        expect.push_back(i);
        cods.push_back(arrows[i].second);
      }
    law(rep, "continuity-witness", !j.empty() && j == expect && leq(meet_all(cods), v) && brute && *brute == j,
        show(x) + " <= " + show(u) + " -> " + show(v));
  }

  const Signature& sig_;
  int complexity_;
  std::vector<std::pair<std::string, int>> ctors_;
};

}  // namespace upl::testing
