#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "upl/signature.hpp"
#include "upl/term.hpp"

namespace upl {

using Assignment = std::map<std::string, Term>;

/// Syntactic matching of a pattern against a term; no reduction.
std::optional<Assignment> match_pattern(const Pattern& p, const Term& m);
std::optional<Assignment> match_patterns(const std::vector<Pattern>& ps, const std::vector<Term>& ms);

/// Reducts at the root only.
std::vector<Term> root_reducts(const Term& m, const Signature& sig);

/// All one-step beta and iota reducts, deduplicated up to alpha.
std::vector<Term> reducts(const Term& m, const Signature& sig);

/// True iff m has no redex.
bool is_normal(const Term& m, const Signature& sig);

enum class Strategy { LeftmostOutermost, RightmostInnermost };

struct NormalForm {
  Term term;
  std::size_t steps = 0;
};
struct FuelExhausted {
  Term last;
};
using NormalizeResult = std::variant<NormalForm, FuelExhausted>;

/// Fuel is the maximum number of reduction steps.
NormalizeResult normalize(const Term& m, const Signature& sig, std::size_t fuel,
                          Strategy strategy = Strategy::LeftmostOutermost);

/// Single step under the given strategy, or nullopt at a normal form.
std::optional<Term> step(const Term& m, const Signature& sig, Strategy strategy);

struct SN {
  std::size_t longest_path = 0;
  std::vector<Term> normal_forms;
};
struct NotSN {
  /// t0 -> t1 -> ... -> tn with tn alpha-equal to some earlier ti.
  std::vector<Term> cycle;
};
struct Unknown {
  std::size_t fuel_spent = 0;
};
using SnVerdict = std::variant<SN, NotSN, Unknown>;

/// Explores the whole reduction graph from m. Fuel bounds the number of
/// distinct terms visited.
SnVerdict check_sn(const Term& m, const Signature& sig, std::size_t fuel);

inline bool is_sn(const SnVerdict& v) { return std::holds_alternative<SN>(v); }

/// Simple terms: not an abstraction, not constructor headed, and not a
/// defined constant applied to fewer arguments than its arity.
bool is_simple(const Term& m, const Signature& sig);

}  // namespace upl
