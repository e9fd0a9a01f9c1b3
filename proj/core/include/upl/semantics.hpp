#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "upl/nbhd.hpp"
#include "upl/signature.hpp"
#include "upl/term.hpp"
#include "upl/typing.hpp"

namespace upl {

/// A finite element of the domain: bottom or a principal filter.
struct FilterElem {
  std::optional<NbhdNF> principal;

  static FilterElem bot() { return {}; }
  static FilterElem top() { return {NbhdNF::nabla()}; }
  static FilterElem up(NbhdNF u) { return {std::move(u)}; }
  bool is_bot() const { return !principal; }
  bool is_top() const { return principal && principal->is_nabla(); }
};

/// Same filter: both bottom, or formally equal principals.
bool same_filter(const FilterElem& a, const FilterElem& b);

/// The filter generated by finitely many neighbourhoods. Derivations,
/// when present, run parallel to `generators`.
struct SemApprox {
  std::vector<NbhdNF> generators;
  std::vector<DerivPtr> derivations;

  static SemApprox bot() { return {}; }
  static SemApprox top() { return {{NbhdNF::nabla()}, {}}; }
  static SemApprox up(NbhdNF u) { return {{std::move(u)}, {}}; }

  bool is_bot() const { return generators.empty(); }
  /// Meet of all generators; nullopt for bottom.
  std::optional<NbhdNF> principal() const;
  FilterElem finite() const { return {principal()}; }
};

bool filter_member(const SemApprox& a, const NbhdNF& u);
SemApprox apply_approx(const SemApprox& a, const SemApprox& b);

using Env = std::map<std::string, SemApprox>;

/// Generators found by bounded typing with each free variable bound to
/// the meet of its environment generators. Bottom when some free
/// variable is bottom or no type is found.
SemApprox sem_approx(const Signature& sig, const Term& m, const Env& rho, int depth);
SemApprox sem_approx(const Signature& sig, const Term& m, const Env& rho, const TypingOptions& opt);

struct Certificate {
  bool certified = false;
  NbhdNF type;
  DerivPtr derivation;
  /// Refuted when the search proved that no type exists.
  Outcome search = Outcome::Unknown;
  std::string reason;
};

/// Free variables are bound to Top.
Certificate certify_sn(const Signature& sig, const Term& m, int depth);
Certificate certify_sn(const Signature& sig, const Term& m, const TypingOptions& opt);

struct EquationCheck {
  std::string name;
  bool passed = true;
  std::string detail;
};

enum class EntryStatus { Holds, DepthInsufficient, Violated };
const char* entry_status_name(EntryStatus s);

struct EntryReport {
  Term term;
  EntryStatus status = EntryStatus::Holds;
  std::vector<EquationCheck> checks;
};

struct ModelReport {
  int depth = 0;
  int delta = 0;
  std::vector<EntryReport> entries;
  std::size_t count(EntryStatus s) const;
};

/// For each term: application soundness and inversion for applications,
/// the substitution equation for beta-redexes, and lhs/rhs agreement for
/// iota-redexes at the root. A failing entry is retried at depth + 2*delta
/// to tell depth-insufficient from violated.
ModelReport model_equation_report(const Signature& sig, const std::vector<Term>& corpus, int depth, int delta = 2);

}  // namespace upl
