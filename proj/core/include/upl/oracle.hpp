#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "upl/nbhd.hpp"
#include "upl/signature.hpp"
#include "upl/term.hpp"
#include "upl/typing.hpp"

namespace upl {

class OracleError : public std::runtime_error {
 public:
  enum class Kind { NotTerminating, FuelExceeded, UniverseNotApplicationClosed, Coverage };

  OracleError(Kind k, const std::string& msg, std::vector<Term> terms = {})
      : std::runtime_error(msg), kind_(k), terms_(std::move(terms)) {}

  Kind kind() const { return kind_; }
  const std::vector<Term>& terms() const { return terms_; }

 private:
  Kind kind_;
  std::vector<Term> terms_;
};

/// A finite set of strongly normalising terms closed under one-step
/// reduction and under taking constructor arguments.
///
/// Layered universes also contain applications: layer 0 is the closure of
/// the seeds, and layer i+1 adds N M for every N up to layer i and every M
/// in the probe pool, keeping only strongly normalising applications.
class TermUniverse {
 public:
  static TermUniverse build(const Signature& sig, const std::vector<Term>& seeds, std::size_t fuel);
  /// `pool` empty means the probe pool is layer 0.
  static TermUniverse build_layered(const Signature& sig, const std::vector<Term>& seeds,
                                    const std::vector<Term>& pool, int layers, std::size_t fuel,
                                    std::size_t sn_fuel = 5000);

  std::size_t size() const { return terms_.size(); }
  const Term& term(std::size_t i) const { return terms_[i]; }
  int level(std::size_t i) const { return level_[i]; }
  bool simple(std::size_t i) const { return simple_[i]; }
  const std::vector<std::size_t>& succ(std::size_t i) const { return succ_[i]; }
  std::optional<std::size_t> find(const Term& t) const;
  const std::vector<std::size_t>& pool() const { return pool_; }
  int max_level() const { return max_level_; }
  /// Indices with every term after all of its reducts.
  const std::vector<std::size_t>& order() const { return order_; }
  const Signature& signature() const { return *sig_; }
  /// N M was dropped because it is not strongly normalising.
  bool known_divergent(std::size_t n, std::size_t m) const;

 private:
  void add_closure(const std::vector<Term>& start, int level, std::size_t fuel);
  std::pair<std::size_t, bool> intern(const Term& t, int level);
  void finish();

  const Signature* sig_ = nullptr;
  std::vector<Term> terms_;
  std::vector<int> level_;
  std::vector<bool> simple_;
  std::vector<std::vector<std::size_t>> succ_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<std::size_t> pool_;
  std::vector<std::size_t> order_;
  std::vector<std::pair<std::size_t, std::size_t>> divergent_;
  int max_level_ = 0;
};

/// Membership is exact for terms of level <= decided; beyond that the set
/// claims nothing.
struct CandidateSet {
  const TermUniverse* universe = nullptr;
  std::vector<char> member;
  int decided = 0;

  bool contains(std::size_t i) const { return member[i] != 0; }
  bool decides(std::size_t i) const { return universe->level(i) <= decided; }
  std::size_t count() const;
};

CandidateSet r0_set(const TermUniverse& u);
CandidateSet con_candidate(const std::string& c, const std::vector<CandidateSet>& args, const TermUniverse& u);
/// Throws OracleError(UniverseNotApplicationClosed) listing missing N M.
CandidateSet arrow_candidate(const CandidateSet& x, const CandidateSet& y, const TermUniverse& u);
CandidateSet intersect(const CandidateSet& a, const CandidateSet& b);

/// Candidate sets per neighbourhood over one universe, memoised.
class RedSets {
 public:
  explicit RedSets(const TermUniverse& u) : u_(u) {}
  const CandidateSet& get(const NbhdNF& nf);
  const TermUniverse& universe() const { return u_; }

 private:
  const TermUniverse& u_;
  std::unordered_map<NbhdNF, CandidateSet, NbhdHash> cache_;
};

CandidateSet red_set(const NbhdNF& nf, const TermUniverse& u);

struct CrReport {
  bool cr1 = true, cr2 = true, cr3 = true;
  std::vector<std::string> violations;
  bool ok() const { return cr1 && cr2 && cr3; }
};

CrReport cr_check(const CandidateSet& x);

struct ProbeResult {
  bool ok = true;
  std::size_t instances = 0;
  std::vector<std::string> violations;
};

/// Substitutes members of red_set(g(x)) from the probe pool for each x
/// (at most `per_var` each) and tests membership of the result in
/// red_set(nf). Throws OracleError(Coverage) listing substituted terms
/// that the universe lacks or does not decide.
ProbeResult soundness_probe(const TypingContext& g, const Term& m, const NbhdNF& nf, const TermUniverse& u,
                            std::size_t per_var = 3);
ProbeResult soundness_probe(const TypingContext& g, const Term& m, const NbhdNF& nf, RedSets& reds,
                            std::size_t per_var = 3);

/// Builds a layered universe and probes; terms reported missing are added
/// as seeds and the universe rebuilt, up to `retries` times.
ProbeResult soundness_probe_auto(const Signature& sig, const TypingContext& g, const Term& m, const NbhdNF& nf,
                                 std::vector<Term> seeds, const std::vector<Term>& pool, int layers,
                                 std::size_t fuel, int retries = 3);

}  // namespace upl
