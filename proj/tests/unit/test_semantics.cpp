#include <doctest.h>

#include "upl/parser.hpp"
#include "upl/semantics.hpp"
#include "upl/stdlib.hpp"

using namespace upl;

namespace {

const Signature& sig() { return standard_signature(); }
Term p(const std::string& s) { return parse_term(s, sig()); }
NbhdNF n(const std::string& s) { return parse_nbhd(s, sig()); }

}  // namespace

TEST_CASE("application of finite elements") {
  SemApprox f = SemApprox::up(n("(0 -> S 0) & (N1 -> N0)"));
  CHECK(eq(*apply_approx(f, SemApprox::up(n("0"))).principal(), n("S 0")));
  CHECK(apply_approx(f, SemApprox::up(n("Nat"))).is_bot());
  CHECK(apply_approx(SemApprox::top(), SemApprox::up(n("0"))).finite().is_top());
  CHECK(apply_approx(SemApprox::up(n("0")), SemApprox::up(n("0"))).is_bot());
  CHECK(apply_approx(f, SemApprox::bot()).is_bot());
}

TEST_CASE("filter membership") {
  SemApprox a{{n("0 -> S 0"), n("N1 -> N0")}, {}};
  CHECK(filter_member(a, n("0 -> S 0")));
  CHECK(filter_member(a, n("(0 -> S 0) & (N1 -> N0)")));
  CHECK_FALSE(filter_member(a, n("Nat -> N0")));
  CHECK_FALSE(filter_member(SemApprox::bot(), n("!")));
}

TEST_CASE("same_filter") {
  CHECK(same_filter(FilterElem::bot(), FilterElem::bot()));
  CHECK_FALSE(same_filter(FilterElem::bot(), FilterElem::top()));
  CHECK(same_filter(FilterElem::up(n("0 -> 0 & S 0")), FilterElem::up(n("0 -> !"))));
}

TEST_CASE("sem_approx of closed terms") {
  CHECK(eq(*sem_approx(sig(), p("S (S 0)"), {}, 3).principal(), n("S (S 0)")));
  CHECK(sem_approx(sig(), p("0 Nat"), {}, 3).is_bot());
  CHECK(sem_approx(sig(), p("exit 0"), {}, 3).finite().is_top());
  for (const auto& d : sem_approx(sig(), p("\\x. S x"), {}, 3).derivations) CHECK(check_derivation(sig(), *d));
}

TEST_CASE("sem_approx reads free variables from the environment") {
  Env rho{{"x", SemApprox::up(n("S 0"))}};
  CHECK(eq(*sem_approx(sig(), p("S x"), rho, 3).principal(), n("S (S 0)")));
  CHECK(sem_approx(sig(), p("S x"), Env{{"x", SemApprox::bot()}}, 3).is_bot());
  CHECK_THROWS_AS(sem_approx(sig(), p("S y"), rho, 3), std::invalid_argument);
}

TEST_CASE("certificates") {
  Certificate c = certify_sn(sig(), p("Rec 0 (\\n. \\r. S r) (S 0)"), 3);
  CHECK(c.certified);
  REQUIRE(c.derivation);
  CHECK(check_derivation(sig(), *c.derivation));

  Certificate none = certify_sn(sig(), p("0 Nat"), 3);
  CHECK_FALSE(none.certified);
  CHECK(none.search == Outcome::Refuted);

  Certificate omega = certify_sn(sig(), p("(\\x. x x) (\\x. x x)"), 3);
  CHECK_FALSE(omega.certified);
}

TEST_CASE("model equations on a small corpus") {
  std::vector<Term> corpus{p("(\\x. S x) 0"), p("(\\x. x x) (\\y. y)"), p("Rec 0 (\\n. \\r. S r) (S 0)"),
                           p("less 0 (S 0)"), p("exit N1"), p("T (\\n. Nat)")};
  ModelReport rep = model_equation_report(sig(), corpus, 3);
  REQUIRE(rep.entries.size() == corpus.size());
  for (const auto& e : rep.entries) {
    INFO(print_term(e.term));
    for (const auto& c : e.checks) CHECK_MESSAGE(c.passed, c.name << ": " << c.detail);
    CHECK(e.status == EntryStatus::Holds);
  }
  CHECK(rep.count(EntryStatus::Holds) == corpus.size());

  auto names = [&](std::size_t i) {
    std::set<std::string> out;
    for (const auto& c : rep.entries[i].checks) out.insert(c.name);
    return out;
  };
  CHECK(names(0).count("substitution"));
  CHECK(names(0).count("application-inversion"));
  CHECK(names(2).count("iota-equation"));
  CHECK(names(4).count("no-match-top"));
}
