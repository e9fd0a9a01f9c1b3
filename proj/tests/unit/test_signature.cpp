#include <doctest.h>

#include <fstream>
#include <sstream>

#include "upl/parser.hpp"
#include "upl/signature.hpp"
#include "upl/stdlib.hpp"

using namespace upl;

namespace {

Signature fixture(const std::string& name) {
  std::ifstream in(std::string(UPL_DATA_DIR) + "/fixtures/" + name);
  REQUIRE(in);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_signature(ss.str());
}

}  // namespace

TEST_CASE("standard signature validates") {
  const Signature& sig = standard_signature();
  auto rep = validate_signature(sig);
  for (const auto& v : rep.violations) FAIL_CHECK(v.message);
  CHECK(sig.is_constructor("S"));
  CHECK(sig.is_defined("Rec"));
  CHECK(*sig.arity("Psi") == 7);
  CHECK(sig.rules_for("trim").size() == 4);
}

TEST_CASE("fixtures are rejected with the matching diagnostic") {
  CHECK(validate_signature(fixture("nonlinear.sig")).has(ViolationKind::NonLinearLhs));
  CHECK(validate_signature(fixture("overlapping.sig")).has(ViolationKind::Overlap));
  CHECK(validate_signature(fixture("escaping.sig")).has(ViolationKind::RhsFreeVariable));
  auto plus = validate_signature(fixture("plus_overlap.sig"));
  CHECK(plus.has(ViolationKind::Overlap));
  CHECK_FALSE(plus.has(ViolationKind::NonLinearLhs));
}

TEST_CASE("each fixture has exactly its own problem") {
  auto nl = validate_signature(fixture("nonlinear.sig"));
  CHECK(nl.violations.size() == 1);
  auto esc = validate_signature(fixture("escaping.sig"));
  CHECK(esc.violations.size() == 1);
  auto ov = validate_signature(fixture("overlapping.sig"));
  REQUIRE(ov.violations.size() == 1);
  CHECK(ov.violations[0].rules.size() == 2);
}

TEST_CASE("structural problems") {
  CHECK(validate_signature(parse_signature("constructor a 0\ndefined a 1\n")).has(ViolationKind::NameClash));
  CHECK(validate_signature(parse_signature("constructor a 0\ndefined f 1\nrule f a a = a\n"))
            .has(ViolationKind::ArityMismatch));
}

TEST_CASE("signature syntax errors") {
  CHECK_THROWS_AS(parse_signature("constructor\n"), ParseError);
  CHECK_THROWS_AS(parse_signature("constructor a x\n"), ParseError);
  CHECK_THROWS_AS(parse_signature("frobnicate a 0\n"), ParseError);
}

TEST_CASE("pattern unification") {
  std::vector<Pattern> a{Pattern::con("S", {Pattern::var("x")})};
  std::vector<Pattern> b{Pattern::var("y")};
  auto u = unify_patterns(a, b);
  REQUIRE(u);
  CHECK(print_pattern(u->at("y")) == "(S x)");
  std::vector<Pattern> z{Pattern::con("0", {})};
  CHECK_FALSE(unify_patterns(a, z));
}
