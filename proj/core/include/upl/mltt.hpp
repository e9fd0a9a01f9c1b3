#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "upl/signature.hpp"
#include "upl/term.hpp"

namespace upl {

/// Dependent type checking over UPL terms. Pi x:A. B is the term
/// Fun A (\x. B) and conversion is untyped beta-iota conversion.

enum class Verdict { Yes, No, Unknown };
const char* verdict_name(Verdict v);

struct TTResult {
  Verdict verdict = Verdict::Yes;
  std::string reason;

  static TTResult yes() { return {}; }
  static TTResult no(std::string why) { return {Verdict::No, std::move(why)}; }
  static TTResult unknown(std::string why) { return {Verdict::Unknown, std::move(why)}; }
  bool ok() const { return verdict == Verdict::Yes; }
};

using TTContext = std::vector<std::pair<std::string, Term>>;

/// A declared type. Schematic variables are bound by `schematics`, in
/// order; they are instantiated per occurrence, either explicitly with
/// c{A := T} or by matching.
struct ConstDecl {
  std::string name;
  Term type;
  TTContext schematics;
};

class MlttEnv {
 public:
  explicit MlttEnv(const Signature& sig, std::size_t fuel = 100000) : sig_(&sig), fuel_(fuel) {}

  /// A constant may carry several declarations (0 : Nat and 0 : N1).
  void declare(ConstDecl d);
  const std::vector<ConstDecl>& declarations(const std::string& name) const;
  std::vector<std::string> declared() const;

  const Signature& signature() const { return *sig_; }
  std::size_t fuel() const { return fuel_; }
  void set_fuel(std::size_t f) { fuel_ = f; }

 private:
  const Signature* sig_;
  std::size_t fuel_;
  std::map<std::string, std::vector<ConstDecl>> decls_;
};

/// Unknown when either side runs out of fuel.
Verdict convertible(const Signature& sig, const Term& a, const Term& b, std::size_t fuel);

TTResult check_context(const MlttEnv& env, const TTContext& g);
TTResult is_type(const MlttEnv& env, const TTContext& g, const Term& a);
TTResult check_term(const MlttEnv& env, const TTContext& g, const Term& m, const Term& a);

struct InferOutcome {
  std::optional<Term> type;
  TTResult result;
};
InferOutcome infer_term(const MlttEnv& env, const TTContext& g, const Term& m);

/// One line of a script.
struct Directive {
  enum class Kind { Constant, Assume, Check, Reject };
  Kind kind;
  std::size_t line = 0;
  std::string text;
  Term subject;
  Term type;
  TTContext schematics;
};

struct DirectiveReport {
  Directive directive;
  TTResult result;
  /// Check: the term was accepted. Reject: it was not accepted.
  /// Constant and Assume: the declaration is well formed.
  bool passed = false;
};

struct ScriptReport {
  std::vector<DirectiveReport> entries;
  bool ok() const;
  std::size_t failures() const;
};

/// Script lines:
///   constant NAME : TYPE [A, B : U, C : Nat -> U]
///   assume x : TYPE
///   check TERM : TYPE
///   reject TERM : TYPE
/// `#` starts a comment. Throws ParseError on malformed lines and on
/// constants missing from the signature.
std::vector<Directive> parse_script(const std::string& text, const Signature& sig);

/// Runs the directives in order. Declarations and assumptions accumulate
/// in `env` and in the returned context.
ScriptReport run_script(const std::vector<Directive>& script, MlttEnv& env, TTContext* ctx = nullptr);

}  // namespace upl
