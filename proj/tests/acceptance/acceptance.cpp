// Acceptance suite: one PASS/FAIL line per criterion.
//
//   upl_acceptance            run everything
//   upl_acceptance --only N   run criterion N

#include <CLI11.hpp>
#include <chrono>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "support/generators.hpp"
#include "support/lattice_laws.hpp"
#include "support/oracles.hpp"
#include "upl/mltt.hpp"
#include "upl/oracle.hpp"
#include "upl/parser.hpp"
#include "upl/reduction.hpp"
#include "upl/semantics.hpp"
#include "upl/stdlib.hpp"

using namespace upl;
using namespace upl::testing;

namespace {

using Clock = std::chrono::steady_clock;

struct CriterionResult {
  bool pass = true;
  std::string detail;
  std::vector<std::string> problems;

  void fail(const std::string& why) {
    pass = false;
    if (problems.size() < 10) problems.push_back(why);
  }
  void expect(bool ok, const std::string& why) {
    if (!ok) fail(why);
  }
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

const Signature& sig() { return standard_signature(); }
Term p(const std::string& s) { return parse_term(s, sig()); }

std::string read_data(const std::string& name) {
  std::ifstream in(std::string(UPL_DATA_DIR) + "/" + name);
  if (!in) throw std::runtime_error("cannot open data/" + name);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> corpus_lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    if (line.find_first_not_of(" \t\r") != std::string::npos) out.push_back(line);
  }
  return out;
}

bool sn_within(const Term& t, std::size_t fuel) { return std::holds_alternative<SN>(check_sn(t, sig(), fuel)); }

// 1. Lattice laws on 10^4 random neighbourhoods of complexity <= 4.
CriterionResult lattice_laws() {
  CriterionResult v;
  auto t0 = Clock::now();
  Rng rng(2024);
  LawChecker laws(sig(), 4);
  LawReport rep;
  laws.run(rng, 10000, rep);
  for (const auto& f : rep.failures) v.fail(f);
  for (const char* law :
       {"nabla-absorbs", "distinct-constructors", "constructor-arrow", "arrow-codomain-meet", "constructor-componentwise",
        "constructor-monotone", "arrow-variance", "reflexive", "transitive", "antisymmetric", "least-nabla",
        "raw-oracle", "normalize-embed", "meet-lower", "meet-greatest", "meet-commutative", "meet-associative",
        "meet-idempotent", "leq-iff-meet", "partition-exclusive", "partition-stable", "partition-distinct-heads",
        "partition-injective", "continuity-brute-agrees", "continuity-witness"})
    v.expect(rep.checked[law] > 0, std::string("law never exercised: ") + law);
  double s = seconds_since(t0);
  v.expect(s < 30.0, "took " + std::to_string(s) + " s");
  std::size_t total = 0;
  for (const auto& [k, c] : rep.checked) total += c;
  v.detail = std::to_string(rep.samples) + " samples, " + std::to_string(total) + " law instances, " +
             std::to_string(s).substr(0, 5) + " s";
  return v;
}

// 2. Every certified term of a mixed corpus is strongly normalising.
const char* const kHandWritten[] = {
    "0", "S (S 0)", "\\x. x", "\\x. S x", "(\\x. x) 0", "(\\x. \\y. x) 0 (S 0)", "(\\x. x x) (\\y. y)",
    "Pair 0 (S 0)", "Inl 0", "Inr (S 0)", "Rec 0 (\\n. \\r. S r) 0", "Rec 0 (\\n. \\r. S r) (S 0)",
    "Rec (S 0) (\\n. \\r. r) (S (S 0))", "less 0 (S 0)", "less (S 0) 0", "S 0 <= S (S 0)", "S (S 0) <= 0",
    "exit 0", "exit N1", "neg Nat", "vec (\\n. Nat) 0", "vec (\\n. Nat) (S 0)", "trim (S 0) 0",
    "(\\f. f 0) (\\x. S x)", "(\\f. \\x. f x) (\\y. y) 0", "(\\x. Pair x x) (S 0)", "\\x. \\y. Pair y x",
    "\\f. f 0", "\\x. Inl x", "(\\x. x) (\\y. y)", "Nat", "N0", "N1", "U", "Nat + N1", "N1 * Nat",
    "0 Nat", "(\\x. x x) (\\x. x x)", "(\\x. x x x) (\\x. x x x)", "S 0 0", "Pair 0 0 0", "(\\x. x 0) 0",
    "Rec 0 0 (S 0)", "\\x. x x", "(\\x. \\y. y) ((\\x. x x) (\\x. x x))",
};

CriterionResult certificate_consistency() {
  CriterionResult v;
  auto t0 = Clock::now();
  std::vector<Term> corpus;
  for (const char* s : kHandWritten) corpus.push_back(p(s));
  std::size_t hand = corpus.size();
  Rng rng(77);
  std::set<std::string> seen;
  for (const auto& t : corpus) seen.insert(alpha_key(t));
  for (int tries = 0; corpus.size() < 240 && tries < 20000; ++tries) {
    Term t = random_closed_term(rng, sig(), 2 + tries % 8);
    if (!seen.insert(alpha_key(t)).second) continue;
    int depth = 1 + tries % 3;
    if (infer(sig(), {}, t, depth).best) corpus.push_back(t);
  }
  v.expect(corpus.size() >= 200, "corpus has only " + std::to_string(corpus.size()) + " terms");
  std::size_t certified = 0;
  for (const auto& t : corpus) {
    Certificate c = certify_sn(sig(), t, 3);
    if (!c.certified) continue;
    ++certified;
    v.expect(c.derivation && check_derivation(sig(), *c.derivation), "invalid certificate for " + print_term(t));
    v.expect(sn_within(t, 200000), "certified but not SN: " + print_term(t));
  }
  v.expect(certified * 2 > corpus.size(), "only " + std::to_string(certified) + " certificates");
  double s = seconds_since(t0);
  v.expect(s < 120.0, "took " + std::to_string(s) + " s");
  v.detail = std::to_string(corpus.size()) + " terms (" + std::to_string(hand) + " hand-written), " +
             std::to_string(certified) + " certified, all SN, " + std::to_string(s).substr(0, 5) + " s";
  return v;
}

// 3. 0 Nat is SN but uncertifiable; Omega loops with a cycle of length 1.
CriterionResult negative_control() {
  CriterionResult v;
  Term zn = p("0 Nat");
  v.expect(sn_within(zn, 1000), "0 Nat is not SN");
  for (int d = 1; d <= 5; ++d) v.expect(!certify_sn(sig(), zn, d).certified, "0 Nat certified at depth " + std::to_string(d));
  SnVerdict o = check_sn(p("(\\x. x x) (\\x. x x)"), sig(), 1000);
  if (auto* c = std::get_if<NotSN>(&o))
    v.expect(c->cycle.size() == 2, "cycle of length " + std::to_string(c->cycle.size() - 1));
  else
    v.fail("Omega not reported NotSN");
  v.detail = "0 Nat SN without certificate at depths 1-5; Omega NotSN, cycle length 1";
  return v;
}

// 4. Reducibility candidates over a finite universe.
//
// The universe and neighbourhoods use only 0 and S so that all
// neighbourhoods of complexity <= 3 fit in one pass.
const Signature& nat_sig() {
  static const Signature s = parse_signature("constructor 0 0\nconstructor S 1\n");
  return s;
}

std::vector<Term> nat_terms(std::initializer_list<const char*> ss) {
  std::vector<Term> out;
  for (const char* s : ss) out.push_back(parse_term(s, nat_sig()));
  return out;
}

// Arrow candidates at nesting k are only decided on universes with k
// application layers.
int arrow_depth(const NbhdNF& a) {
  int d = 0;
  if (a.is_con())
    for (const auto& x : a.args()) d = std::max(d, arrow_depth(x));
  if (a.is_arrows())
    for (const auto& [x, y] : a.arrow_set()) d = std::max(d, 1 + std::max(arrow_depth(x), arrow_depth(y)));
  return d;
}

void check_cr(CriterionResult& v, const CandidateSet& x, const std::string& name) {
  CrReport r = cr_check(x);
  if (!r.ok()) v.fail(name + ": " + (r.violations.empty() ? std::string("CR failure") : r.violations[0]));
}

CriterionResult oracle_checks() {
  CriterionResult v;
  const Signature& ns = nat_sig();
  std::vector<Term> seeds = nat_terms({"0", "S 0", "S (S 0)", "S (S (S 0))", "x", "y", "S x", "\\z. z", "\\z. S z",
                                       "\\z. 0", "\\z. S (S z)", "\\z. \\w. z", "\\z. \\w. w", "\\f. f 0",
                                       "\\f. f (f 0)", "\\z. x", "x 0", "(\\z. z) 0", "(\\z. S z) (S 0)"});
  std::vector<Term> pool = nat_terms({"0", "S 0", "S (S 0)", "x", "\\z. z", "\\z. S z", "\\z. 0"});
  TermUniverse u = TermUniverse::build_layered(ns, seeds, pool, 2, 200000);
  RedSets reds(u);

  std::vector<NbhdNF> nbhds;
  for (const auto& a : nbhd_universe(ns, 3, 100000))
    if (a.complexity() <= 3) nbhds.push_back(a);

  // Monotonicity: U <= V implies red(U) within red(V) on decided terms.
  std::size_t pairs = 0, related = 0, memberships = 0;
  for (const auto& a : nbhds)
    for (const auto& b : nbhds) {
      ++pairs;
      if (!leq(a, b)) continue;
      ++related;
      const CandidateSet& x = reds.get(a);
      const CandidateSet& y = reds.get(b);
      for (std::size_t i = 0; i < u.size(); ++i)
        if (x.decides(i) && y.decides(i) && x.contains(i) && !(++memberships, y.contains(i)))
          v.fail(print_term(u.term(i)) + " in red(" + print_nbhd(a) + ") but not red(" + print_nbhd(b) + ")");
    }

  // CR1-CR3 for the three candidate builders.
  CandidateSet r0 = r0_set(u);
  check_cr(v, r0, "R0");
  CandidateSet zero = con_candidate("0", {}, u);
  check_cr(v, zero, "con 0");
  CandidateSet s0 = con_candidate("S", {zero}, u);
  check_cr(v, s0, "con S 0");
  check_cr(v, con_candidate("S", {r0}, u), "con S R0");
  check_cr(v, arrow_candidate(zero, s0, u), "arrow 0 S0");
  check_cr(v, arrow_candidate(r0, r0, u), "arrow R0 R0");
  check_cr(v, arrow_candidate(s0, zero, u), "arrow S0 0");
  for (const auto& a : nbhds) check_cr(v, reds.get(a), "red(" + print_nbhd(a) + ")");

  // Soundness probes on seeded derivations.
  Rng rng(5);
  std::vector<NbhdNF> ctx_types{parse_nbhd("0", ns), parse_nbhd("S 0", ns), parse_nbhd("S !", ns),
                                parse_nbhd("0 -> S 0", ns)};
  std::size_t probes = 0, instances = 0;
  for (int tries = 0; probes < 50 && tries < 5000; ++tries) {
    std::vector<std::string> scope{"y"};
    Term m = random_term(rng, ns, 1 + tries % 5, scope);
    TypingContext g{{"y", ctx_types[pick(rng, ctx_types.size())]}};
    InferResult r = infer(ns, g, m, 2);
    if (!r.best) continue;
    ++probes;
    try {
      ProbeResult pr = soundness_probe_auto(ns, g, m, r.best->type, {m}, pool,
                                            std::max(1, arrow_depth(r.best->type)), 200000);
      instances += pr.instances;
      if (!pr.ok)
        v.fail("probe " + print_term(m) + " : " + print_nbhd(r.best->type) + ": " +
               (pr.violations.empty() ? std::string("?") : pr.violations[0]));
    } catch (const OracleError& e) {
      v.fail("probe " + print_term(m) + ": " + e.what());
    }
  }
  v.expect(probes == 50, "only " + std::to_string(probes) + " derivations");
  v.expect(memberships > 1000, "monotonicity barely exercised");
  v.expect(u.size() >= 500, "universe of only " + std::to_string(u.size()) + " terms");
  v.detail = std::to_string(u.size()) + " terms, " + std::to_string(nbhds.size()) + " neighbourhoods, " +
             std::to_string(related) + "/" + std::to_string(pairs) + " related pairs, " +
             std::to_string(memberships) + " memberships, " + std::to_string(probes) +
             " probes with " + std::to_string(instances) + " instances";
  return v;
}

// 5. Model equations on the corpus file at depth 4.
CriterionResult model_equations() {
  CriterionResult v;
  std::vector<Term> corpus;
  for (const auto& l : corpus_lines(read_data("model_corpus.txt"))) corpus.push_back(p(l));
  v.expect(corpus.size() == 40, "corpus has " + std::to_string(corpus.size()) + " entries");
  ModelReport rep = model_equation_report(sig(), corpus, 4);
  for (const auto& e : rep.entries)
    if (e.status != EntryStatus::Holds) v.fail(print_term(e.term) + ": " + entry_status_name(e.status));
  v.detail = std::to_string(rep.count(EntryStatus::Holds)) + "/" + std::to_string(corpus.size()) + " hold";
  return v;
}

// 6. Arithmetic in the standard signature.
Term nf(const Term& t) {
  auto r = normalize(t, sig(), 100000);
  if (!std::holds_alternative<NormalForm>(r)) throw std::runtime_error("no normal form for " + print_term(t));
  return std::get<NormalForm>(r).term;
}

Term call(const std::string& f, std::vector<Term> args) { return Term::app(Term::constant(f), args); }

CriterionResult stdlib_arithmetic() {
  CriterionResult v;
  std::size_t cases = 0;
  for (int a = 0; a <= 8; ++a)
    for (int b = 0; b <= 8; ++b) {
      Term le = nf(call("<=", {numeral(a), numeral(b)}));
      v.expect(le.is_const() && le.name() == (a <= b ? "N1" : "N0"), std::to_string(a) + " <= " + std::to_string(b));
      Term lt = nf(call("less", {numeral(a), numeral(b)}));
      v.expect(lt.is_app() && lt.fn().is_const() && lt.fn().name() == (a < b ? "Inl" : "Inr"),
               "less " + std::to_string(a) + " " + std::to_string(b));
      cases += 2;
    }
  Term step = p("\\n. \\r. S r");
  for (int k = 0; k <= 6; ++k) {
    Term expect = Term::var("b");
    for (int i = 0; i < k; ++i) expect = Term::app(Term::constant("S"), expect);
    v.expect(alpha_eq(nf(call("Rec", {Term::var("b"), step, numeral(k)})), expect), "Rec at " + std::to_string(k));
    ++cases;
  }
  for (int len = 1; len <= 4; ++len) {
    std::vector<Term> elems;
    for (int i = 0; i < len; ++i) elems.push_back(numeral(10 + i));
    std::vector<Term> longer = elems;
    longer.push_back(numeral(99));
    for (int i = 0; i < len; ++i) {
      auto at = [&](int l, const std::vector<Term>& e) { return regression_get(l, i, e); };
      v.expect(alpha_eq(at(len, elems), elems[static_cast<std::size_t>(i)]),
               "get " + std::to_string(i) + " of " + std::to_string(len));
      v.expect(alpha_eq(at(len + 1, longer), elems[static_cast<std::size_t>(i)]),
               "get " + std::to_string(i) + " after appending to " + std::to_string(len));
      cases += 2;
    }
  }
  v.detail = std::to_string(cases) + " cases";
  return v;
}

// 7. Dependent type checking on the declarations and the corpus script.
CriterionResult mltt_checks() {
  CriterionResult v;
  MlttEnv env(sig());
  ScriptReport decl = run_script(parse_script(standard_declarations_text(), sig()), env);
  v.expect(decl.ok(), std::to_string(decl.failures()) + " declarations failed");
  auto checks = [&](const char* m, const char* a) { return check_term(env, {}, p(m), p(a)).ok(); };
  v.expect(checks("\\A. \\x. x", "Pi A:U. A -> A"), "identity rejected");
  v.expect(check_term(env, {}, dns_term(),
                      p("Pi B:Nat -> U. (Pi n:Nat. neg (neg (B n))) -> neg (neg (Pi n:Nat. B n))"))
               .ok(),
           "double negation shift rejected");
  const char* const bad[][2] = {{"0", "N0"},
                                {"S", "Nat"},
                                {"\\x. x", "Nat"},
                                {"S 0 0", "Nat"},
                                {"\\A. \\x. x", "Pi A:U. A -> Nat"}};
  for (const auto& [m, a] : bad) v.expect(!checks(m, a), std::string("accepted ") + m + " : " + a);

  MlttEnv env2 = env;
  ScriptReport rep = run_script(parse_script(read_data("mltt_corpus.tt"), sig()), env2);
  std::size_t accepted = 0;
  for (const auto& e : rep.entries) {
    v.expect(e.passed, "corpus line " + std::to_string(e.directive.line) + ": " + e.directive.text);
    if (e.directive.kind != Directive::Kind::Check || !e.result.ok() || !free_vars(e.directive.subject).empty())
      continue;
    ++accepted;
    v.expect(sn_within(e.directive.subject, 200000), "accepted but not SN: " + e.directive.text);
  }
  v.detail = std::to_string(rep.entries.size()) + " corpus entries, " + std::to_string(accepted) +
             " accepted closed terms, all SN";
  return v;
}

// 8. Signature validation.
CriterionResult signature_validation() {
  CriterionResult v;
  v.expect(validate_signature(sig()).ok(), "standard signature rejected");
  v.expect(validate_signature(parse_signature(read_data("std.sig"))).ok(), "data/std.sig rejected");
  const std::pair<const char*, ViolationKind> fixtures[] = {{"fixtures/nonlinear.sig", ViolationKind::NonLinearLhs},
                                                            {"fixtures/overlapping.sig", ViolationKind::Overlap},
                                                            {"fixtures/escaping.sig", ViolationKind::RhsFreeVariable},
                                                            {"fixtures/plus_overlap.sig", ViolationKind::Overlap}};
  for (const auto& [file, kind] : fixtures) {
    ValidationReport r = validate_signature(parse_signature(read_data(file)));
    v.expect(r.has(kind), std::string(file) + " lacks " + violation_name(kind));
    for (const auto& x : r.violations)
      v.expect(x.kind == kind, std::string(file) + " also reports " + violation_name(x.kind));
  }
  v.detail = "std valid; nonlinear, overlapping, escaping and + fixtures rejected";
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  int only = 0;
  app.add_option("--only", only, "run a single criterion")->check(CLI::Range(1, 8));
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::pair<const char*, std::function<CriterionResult()>>> criteria{
      {"lattice laws", lattice_laws},
      {"certificate consistency", certificate_consistency},
      {"negative control", negative_control},
      {"oracle", oracle_checks},
      {"model equations", model_equations},
      {"stdlib arithmetic", stdlib_arithmetic},
      {"mltt", mltt_checks},
      {"signature validation", signature_validation},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (only && static_cast<std::size_t>(only) != i + 1) continue;
    CriterionResult v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v.fail(std::string("exception: ") + e.what());
    }
    std::cout << (v.pass ? "PASS" : "FAIL") << "  " << i + 1 << ". " << criteria[i].first << ": " << v.detail << "\n";
    for (const auto& pr : v.problems) std::cout << "      " << pr << "\n";
    if (!v.pass) ++failed;
  }
  return failed ? 1 : 0;
}
