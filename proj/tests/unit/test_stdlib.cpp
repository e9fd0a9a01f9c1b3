#include <doctest.h>

#include "support/oracles.hpp"
#include "upl/parser.hpp"
#include "upl/reduction.hpp"
#include "upl/stdlib.hpp"

using namespace upl;
using upl::testing::numeral_value;

namespace {

const Signature& sig() { return standard_signature(); }

Term nf(const Term& t) {
  auto r = normalize(t, sig(), 100000);
  REQUIRE(std::holds_alternative<NormalForm>(r));
  return std::get<NormalForm>(r).term;
}

Term app(const std::string& f, std::vector<Term> args) { return Term::app(Term::constant(f), args); }

}  // namespace

TEST_CASE("numerals") {
  CHECK(print_term(numeral(0)) == "0");
  CHECK(print_term(numeral(2)) == "S (S 0)");
  for (int i = 0; i < 10; ++i) CHECK(numeral_value(numeral(i)) == i);
}

TEST_CASE("comparison") {
  for (int m = 0; m <= 8; ++m)
    for (int k = 0; k <= 8; ++k) {
      Term le = nf(app("<=", {numeral(m), numeral(k)}));
      CHECK(le.name() == (m <= k ? "N1" : "N0"));
      Term lt = nf(app("less", {numeral(m), numeral(k)}));
      REQUIRE(lt.is_app());
      CHECK(lt.fn().name() == (m < k ? "Inl" : "Inr"));
    }
}

TEST_CASE("recursion") {
  Term step = parse_term("\\n. \\r. S r", sig());
  for (int k = 0; k <= 6; ++k) CHECK(numeral_value(nf(app("Rec", {numeral(3), step, numeral(k)}))) == 3 + k);
}

TEST_CASE("vectors") {
  CHECK(print_term(vec_value({})) == "0");
  CHECK(print_term(vec_value({numeral(1), numeral(2)})) == "Pair (Pair 0 (S 0)) (S (S 0))");
  Term ty = nf(app("vec", {parse_term("\\n. Nat", sig()), numeral(2)}));
  CHECK(alpha_eq(ty, parse_term("N1 * Nat * Nat", sig())));
}

TEST_CASE("get reads vector elements") {
  std::vector<Term> elems{numeral(5), numeral(6), numeral(7), numeral(8)};
  for (int len = 1; len <= 4; ++len) {
    std::vector<Term> v(elems.begin(), elems.begin() + len);
    for (int i = 0; i < len; ++i) CHECK(alpha_eq(regression_get(len, i, v), v[static_cast<std::size_t>(i)]));
  }
  CHECK_THROWS_AS(regression_get(2, 2, {numeral(1), numeral(2)}), std::invalid_argument);
}

TEST_CASE("the double negation shift term") {
  Term t = dns_term();
  CHECK(print_term(t) == "\\B. \\H. \\K. Phi B H K 0 0");
}

TEST_CASE("declarations text is present") {
  CHECK(standard_signature_text().find("defined Phi 5") != std::string::npos);
  CHECK(standard_declarations_text().find("Phi :") != std::string::npos);
}
