#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "upl/nbhd.hpp"
#include "upl/signature.hpp"
#include "upl/term.hpp"

namespace upl {

/// Ordered bindings; lookup finds the last binding of a name.
class TypingContext {
 public:
  TypingContext() = default;
  TypingContext(std::initializer_list<std::pair<std::string, NbhdNF>> b) : bindings_(b) {}

  const NbhdNF* lookup(const std::string& x) const;
  /// Index of the binding lookup(x) would use.
  std::optional<std::size_t> index_of(const std::string& x) const;
  TypingContext extend(const std::string& x, const NbhdNF& u) const;
  void push(const std::string& x, const NbhdNF& u) { bindings_.emplace_back(x, u); }

  const std::vector<std::pair<std::string, NbhdNF>>& bindings() const { return bindings_; }
  std::vector<std::pair<std::string, NbhdNF>>& bindings() { return bindings_; }
  std::size_t size() const { return bindings_.size(); }

  friend bool operator==(const TypingContext& a, const TypingContext& b);

 private:
  std::vector<std::pair<std::string, NbhdNF>> bindings_;
};

std::string print_context(const TypingContext& g);

enum class TypingRule {
  Var,
  ConstructorIntro,
  LamIntro,
  AppElim,
  MeetIntro,
  Subsume,
  DefinedMatch,
  DefinedNoMatch,
};

const char* rule_name(TypingRule r);

struct Derivation;
using DerivPtr = std::shared_ptr<const Derivation>;

/// A node of a derivation of `ctx |- subject : type`.
///
/// For the constant rules, `arg_types` holds U1..Uk. For DefinedMatch,
/// `rewrite_rule` indexes Signature::rules() and `assignment` holds the
/// pattern instance W1..Wn; the premise is typed in ctx extended by the
/// rule variables in lhs order.
struct Derivation {
  TypingRule rule = TypingRule::Var;
  TypingContext ctx;
  Term subject;
  NbhdNF type;
  std::vector<DerivPtr> premises;
  std::vector<NbhdNF> arg_types;
  std::optional<std::size_t> rewrite_rule;
  NbhdAssignment assignment;
};

/// U1 -> ... -> Uk -> v.
NbhdNF arrow_chain(const std::vector<NbhdNF>& doms, const NbhdNF& cod);

/// Empty when every node instantiates a rule; otherwise a description of
/// the first bad node.
std::optional<std::string> derivation_error(const Signature& sig, const Derivation& d);
inline bool check_derivation(const Signature& sig, const Derivation& d) { return !derivation_error(sig, d); }

/// Number of nodes, counting shared premises once per occurrence.
std::size_t derivation_size(const Derivation& d);

enum class Outcome { Valid, Refuted, Unknown };
const char* outcome_name(Outcome o);

struct CheckOutcome {
  Outcome outcome = Outcome::Unknown;
  DerivPtr derivation;  // set iff Valid
  std::string reason;   // set iff Refuted
};

/// Search limits. `depth` bounds neighbourhood complexity in the
/// enumerated universes and the number of non-decreasing rule unfoldings.
struct TypingOptions {
  int depth = 3;
  std::size_t universe_cap = 48;
  std::size_t domain_cap = 10;
  std::size_t closure_cap = 64;
  /// Syntax-tree size past which a best abstraction type stops taking
  /// further domains. Nested abstractions otherwise grow as domain_cap^k.
  std::size_t type_cap = 600;
  /// Search nodes before giving up with Unknown.
  std::size_t max_steps = 400000;
};

CheckOutcome check_type(const Signature& sig, const TypingContext& g, const Term& m, const NbhdNF& u,
                        const TypingOptions& opt);
CheckOutcome check_type(const Signature& sig, const TypingContext& g, const Term& m, const NbhdNF& u, int depth);

struct Typed {
  NbhdNF type;
  DerivPtr derivation;
};

struct InferResult {
  Outcome outcome = Outcome::Unknown;  // Valid iff some type was found
  /// The most informative type found; first element of `types`.
  std::optional<Typed> best;
  /// best, then its supersets in the universe, then meets of those.
  std::vector<Typed> types;
};

InferResult infer(const Signature& sig, const TypingContext& g, const Term& m, const TypingOptions& opt);
InferResult infer(const Signature& sig, const TypingContext& g, const Term& m, int depth);

/// Some type, preferring the cheapest derivation (e.g. domain nabla for
/// abstractions).
CheckOutcome find_any_type(const Signature& sig, const TypingContext& g, const Term& m, const TypingOptions& opt);

/// The V with f : args -> V. Empty when the matched rule's right-hand
/// side could not be typed within the depth; {nabla} when no rule matches.
std::vector<Typed> constant_type(const Signature& sig, const std::string& f, const std::vector<NbhdNF>& args,
                                 const TypingContext& g, const TypingOptions& opt);

/// From a derivation of g |- \x. N : U -> V, a derivation of g, x:U |- N : V.
/// Throws std::invalid_argument if the conclusion is not of that shape.
DerivPtr invert_lambda(const Signature& sig, const Derivation& d);

struct AppInversion {
  NbhdNF u;
  DerivPtr fn;
  DerivPtr arg;
};

/// From a derivation of g |- N M : V, some U with N : U -> V and M : U.
/// Throws std::invalid_argument if the subject is not an application or
/// the derivation has an unexpected shape.
AppInversion invert_app(const Signature& sig, const Derivation& d);

// Builders. Each sets ctx to `g` as given.
DerivPtr make_var(const TypingContext& g, const std::string& x);
DerivPtr make_constructor(const TypingContext& g, const std::string& c, const std::vector<NbhdNF>& args);
DerivPtr make_lam(const TypingContext& g, const Term& lam, const NbhdNF& dom, DerivPtr body);
DerivPtr make_app(const TypingContext& g, const Term& app, DerivPtr fn, DerivPtr arg);
DerivPtr make_meet(DerivPtr a, DerivPtr b);
/// Returns `d` unchanged when its type is already structurally `u`.
DerivPtr make_subsume(DerivPtr d, const NbhdNF& u);
DerivPtr make_defined_match(const Signature& sig, const TypingContext& g, const std::string& f,
                            const std::vector<NbhdNF>& args, std::size_t rule, const NbhdAssignment& w, DerivPtr rhs);
DerivPtr make_defined_nomatch(const TypingContext& g, const std::string& f, const std::vector<NbhdNF>& args);

/// g extended by the variables of `rule` in lhs order, typed by `w`.
TypingContext extend_rule_vars(const Signature& sig, const TypingContext& g, std::size_t rule,
                               const NbhdAssignment& w);

/// Rebuilds every node's context top-down from `g`. Search results are
/// produced with local contexts; this is applied before returning them.
DerivPtr rebase(const Signature& sig, const Derivation& d, const TypingContext& g);

/// Substitution of closed terms into a derivation. `d` derives
/// g, x1:W1, ..., xn:Wn |- N : V and parts[xi] derives |- Mi : Wi with Mi
/// closed; the result derives g |- N[xi := Mi] : V.
DerivPtr graft(const Signature& sig, const Derivation& d, const std::map<std::string, DerivPtr>& parts,
               const TypingContext& g);

struct Split {
  /// g, x1:W1, ..., xn:Wn |- N : V, bindings in `sigma` order.
  DerivPtr body;
  /// |- Mi : Wi, parallel to `sigma`.
  std::vector<DerivPtr> parts;
};

/// The converse of graft. `d` derives g |- N[sigma] : V for closed terms in
/// sigma; each Wi is the meet of the types used at the occurrences of xi.
/// A variable without occurrences takes its part from `fallback`. Throws
/// std::invalid_argument if `d` does not follow the shape of N.
Split split(const Signature& sig, const Derivation& d, const Term& n,
            const std::vector<std::pair<std::string, Term>>& sigma, const TypingContext& g,
            const std::map<std::string, DerivPtr>& fallback = {});

}  // namespace upl
