#include <doctest.h>

#include "support/generators.hpp"
#include "support/oracles.hpp"
#include "upl/parser.hpp"
#include "upl/reduction.hpp"
#include "upl/stdlib.hpp"

using namespace upl;
using namespace upl::testing;

namespace {

const Signature& sig() { return standard_signature(); }
Term p(const std::string& s) { return parse_term(s, sig()); }

Term nf(const std::string& s, Strategy st = Strategy::LeftmostOutermost) {
  auto r = normalize(p(s), sig(), 10000, st);
  REQUIRE(std::holds_alternative<NormalForm>(r));
  return std::get<NormalForm>(r).term;
}

}  // namespace

TEST_CASE("beta and iota steps") {
  CHECK(alpha_eq(nf("(\\x. S x) 0"), p("S 0")));
  CHECK(alpha_eq(nf("Rec 0 (\\n. \\r. S (S r)) (S (S 0))"), p("S (S (S (S 0)))")));
  CHECK(alpha_eq(nf("less (S 0) (S (S 0))"), p("Inl 0")));
  CHECK(alpha_eq(nf("S (S 0) <= S 0"), p("N0")));
  CHECK(alpha_eq(nf("neg Nat"), p("Nat -> N0")));
}

TEST_CASE("a defined constant without a matching rule is stuck") {
  CHECK(is_normal(p("exit 0"), sig()));
  CHECK(is_normal(p("Rec 0 0 Nat"), sig()));
  CHECK(root_reducts(p("head 0 0"), sig()).empty());
}

TEST_CASE("root and inner reducts") {
  Term t = p("(\\x. S x) ((\\y. y) 0)");
  CHECK(root_reducts(t, sig()).size() == 1);
  CHECK(reducts(t, sig()).size() == 2);
}

TEST_CASE("strategies reach the same normal form") {
  for (const char* s : {"(\\x. \\y. x) 0 ((\\z. z) N1)", "Rec 0 (\\n. \\r. S r) (S (S 0))", "vec (\\n. Nat) (S (S 0))"})
    CHECK(alpha_eq(nf(s), nf(s, Strategy::RightmostInnermost)));
}

TEST_CASE("fuel runs out on a loop") {
  auto r = normalize(p("(\\x. x x) (\\x. x x)"), sig(), 50);
  CHECK(std::holds_alternative<FuelExhausted>(r));
}

TEST_CASE("omega has a cycle of length one") {
  auto v = check_sn(p("(\\x. x x) (\\x. x x)"), sig(), 1000);
  REQUIRE(std::holds_alternative<NotSN>(v));
  const auto& cyc = std::get<NotSN>(v).cycle;
  CHECK(cyc.size() == 2);
  CHECK(alpha_eq(cyc.front(), cyc.back()));
}

TEST_CASE("SN verdicts report normal forms and the longest path") {
  auto v = check_sn(p("(\\x. \\y. x) 0 ((\\z. z) N1)"), sig(), 1000);
  REQUIRE(std::holds_alternative<SN>(v));
  const auto& sn = std::get<SN>(v);
  CHECK(sn.longest_path == 3);
  REQUIRE(sn.normal_forms.size() == 1);
  CHECK(alpha_eq(sn.normal_forms[0], p("0")));
  CHECK(is_sn(check_sn(p("0 Nat"), sig(), 10)));
}

TEST_CASE("a non-normalising term that only grows is Unknown") {
  // \x. x x S grows on every step, so no cycle exists.
  auto v = check_sn(p("(\\x. x x (S 0)) (\\x. x x (S 0))"), sig(), 200);
  CHECK(std::holds_alternative<Unknown>(v));
}

TEST_CASE("check_sn agrees with the graph oracle on random terms") {
  Rng rng(21);
  int decided = 0;
  for (int i = 0; i < 400; ++i) {
    Term t = random_closed_term(rng, sig(), 2 + i % 9);
    SnOracle o = sn_oracle(t, sig(), 2000);
    if (o == SnOracle::TooBig) continue;
    SnVerdict v = check_sn(t, sig(), 5000);
    INFO(print_term(t));
    if (o == SnOracle::SN) CHECK(std::holds_alternative<SN>(v));
    if (o == SnOracle::NotSN) CHECK(std::holds_alternative<NotSN>(v));
    ++decided;
  }
  CHECK(decided > 300);
}

TEST_CASE("normal forms of SN terms are irreducible and reached by normalize") {
  Rng rng(8);
  for (int i = 0; i < 200; ++i) {
    Term t = random_closed_term(rng, sig(), 2 + i % 7);
    SnVerdict v = check_sn(t, sig(), 3000);
    if (!is_sn(v)) continue;
    for (const auto& n : std::get<SN>(v).normal_forms) CHECK(is_normal(n, sig()));
    auto r = normalize(t, sig(), 10000);
    REQUIRE(std::holds_alternative<NormalForm>(r));
    CHECK(std::get<SN>(v).normal_forms.size() == 1);
    CHECK(alpha_eq(std::get<NormalForm>(r).term, std::get<SN>(v).normal_forms[0]));
  }
}

TEST_CASE("simple terms") {
  CHECK(is_simple(p("x 0"), sig()));
  CHECK(is_simple(p("Rec 0 x y"), sig()));
  CHECK_FALSE(is_simple(p("Rec 0 x"), sig()));
  CHECK_FALSE(is_simple(p("S 0"), sig()));
  CHECK_FALSE(is_simple(p("\\x. x"), sig()));
}

TEST_CASE("syntactic matching") {
  const auto& rule = sig().rules()[sig().rules_for("Rec")[1]];
  auto w = match_patterns(rule.lhs, {p("0"), p("f"), p("S (S 0)")});
  REQUIRE(w);
  CHECK(alpha_eq(w->at("x"), p("S 0")));
  CHECK_FALSE(match_patterns(rule.lhs, {p("0"), p("f"), p("0")}));
}
