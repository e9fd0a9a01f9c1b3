#include <doctest.h>

#include <string>
#include <vector>

#include "support/generators.hpp"
#include "upl/parser.hpp"
#include "upl/stdlib.hpp"
#include "upl/term.hpp"

using namespace upl;
using upl::testing::Rng;

namespace {

const Signature& std_sig() { return standard_signature(); }

Term p(const std::string& s) { return parse_term(s, std_sig()); }

// de Bruijn rendering; bound variables become indices, free ones keep
// their names. Two terms are alpha-equal iff their renderings agree.
std::string db(const Term& m, std::vector<std::string>& env) {
  switch (m.kind()) {
    case TermKind::Var:
      for (std::size_t i = env.size(); i-- > 0;)
        if (env[i] == m.name()) return "#" + std::to_string(env.size() - 1 - i);
      return m.name();
    case TermKind::Const:
      return "'" + m.name();
    case TermKind::App:
      return "(" + db(m.fn(), env) + " " + db(m.arg(), env) + ")";
    case TermKind::Lam: {
      env.push_back(m.name());
      std::string b = db(m.body(), env);
      env.pop_back();
      return "\\." + b;
    }
  }
  return "?";
}

std::string db(const Term& m) {
  std::vector<std::string> env;
  return db(m, env);
}

}  // namespace

TEST_CASE("parser reads constants, variables and binders") {
  Term t = p("\\x. S x");
  REQUIRE(t.is_lam());
  CHECK(t.name() == "x");
  CHECK(t.body().fn().is_const());
  CHECK(t.body().arg().is_var());

  Term shadow = p("\\S. S 0");
  CHECK(shadow.body().fn().is_var());
}

TEST_CASE("application associates to the left") {
  Term t = p("Pair 0 (S 0)");
  CHECK(t.fn().fn().name() == "Pair");
  CHECK(print_term(t) == "Pair 0 (S 0)");
}

TEST_CASE("infix operators and sections") {
  CHECK(alpha_eq(p("0 <= S 0"), p("(<=) 0 (S 0)")));
  CHECK(alpha_eq(p("Nat + N0 + N1"), p("(+) ((+) Nat N0) N1")));
  CHECK(alpha_eq(p("Nat -> N0"), p("Fun Nat (\\_. N0)")));
  Term pi = p("Pi n:Nat. vec (\\k. Nat) n");
  CHECK(pi.fn().fn().name() == "Fun");
  CHECK(pi.arg().is_lam());
}

TEST_CASE("parse errors carry a position") {
  CHECK_THROWS_AS(p("\\x."), ParseError);
  CHECK_THROWS_AS(p("(S 0"), ParseError);
  try {
    p("S 0 )");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 1);
    CHECK(e.column() >= 5);
  }
}

TEST_CASE("free variables and spines") {
  Term t = p("\\x. f x y");
  CHECK(free_vars(t) == std::set<std::string>{"f", "y"});
  Spine s = spine(p("Rec 0 f (S 0)"));
  CHECK(s.head.name() == "Rec");
  CHECK(s.args.size() == 3);
}

TEST_CASE("substitution avoids capture") {
  Term t = substitute(p("\\y. x y"), "x", p("y"));
  REQUIRE(t.is_lam());
  CHECK(t.name() != "y");
  CHECK(t.body().fn().name() == "y");
  CHECK(alpha_eq(substitute(p("\\x. x"), "x", p("0")), p("\\z. z")));
}

TEST_CASE("print and parse round trip on random terms") {
  Rng rng(7);
  for (int i = 0; i < 500; ++i) {
    Term t = upl::testing::random_closed_term(rng, std_sig(), 1 + static_cast<int>(i % 12));
    Term back = parse_term(print_term(t), std_sig());
    INFO(print_term(t));
    CHECK(db(back) == db(t));
  }
}

TEST_CASE("alpha equality agrees with de Bruijn rendering") {
  Rng rng(11);
  std::vector<Term> ts;
  for (int i = 0; i < 120; ++i) ts.push_back(upl::testing::random_closed_term(rng, std_sig(), 1 + i % 6));
  for (const auto& a : ts)
    for (const auto& b : ts) CHECK(alpha_eq(a, b) == (db(a) == db(b)));
}

TEST_CASE("substitution matches a de Bruijn reference") {
  // (\x. N) M and N[x := M] must agree with the index-level result,
  // computed here by substituting into the rendering of a closed M.
  Rng rng(3);
  for (int i = 0; i < 300; ++i) {
    std::vector<std::string> scope{"x"};
    Term n = upl::testing::random_term(rng, std_sig(), 1 + i % 8, scope);
    Term m = upl::testing::random_closed_term(rng, std_sig(), 1 + i % 4);
    Term r = substitute(n, "x", m);
    CHECK(!occurs_free("x", r));
    CHECK(alpha_key(r) == alpha_key(substitute(substitute(n, "x", Term::var("fresh_x")), "fresh_x", m)));
  }
}

TEST_CASE("fresh names avoid the given set") {
  std::set<std::string> avoid{"x", "x1", "x2"};
  std::string f = fresh_name("x", avoid);
  CHECK(avoid.count(f) == 0);
}
