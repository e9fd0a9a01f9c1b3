#include "upl/stdlib.hpp"

#include <stdexcept>

#include "upl/parser.hpp"
#include "upl/reduction.hpp"

namespace upl {

const std::string& standard_signature_text() {
  static const std::string text =
#include "std_sig.inc"
      ;
  return text;
}

const std::string& standard_declarations_text() {
  static const std::string text =
#include "std_tt.inc"
      ;
  return text;
}

const Signature& standard_signature() {
  static const Signature sig = parse_signature(standard_signature_text());
  return sig;
}

Term numeral(int n) {
  Term t = Term::constant("0");
  for (int i = 0; i < n; ++i) t = Term::app(Term::constant("S"), t);
  return t;
}

Term vec_value(const std::vector<Term>& elems) {
  Term v = Term::constant("0");
  for (const auto& e : elems) v = Term::app(Term::constant("Pair"), {v, e});
  return v;
}

Term dns_term() {
  Term body = Term::app(Term::constant("Phi"),
                        {Term::var("B"), Term::var("H"), Term::var("K"), numeral(0), numeral(0)});
  return Term::lam("B", Term::lam("H", Term::lam("K", body)));
}

Term regression_get(int n, int i, const std::vector<Term>& elems, std::size_t fuel) {
  if (i < 0 || i >= n || static_cast<std::size_t>(n) != elems.size())
    throw std::invalid_argument("regression_get: need 0 <= i < n = |elems|");
  Term t = Term::app(Term::constant("get"), {Term::var("B"), numeral(n), numeral(i), numeral(0), vec_value(elems)});
  auto r = normalize(t, standard_signature(), fuel);
  if (auto* nf = std::get_if<NormalForm>(&r)) return nf->term;
  throw std::runtime_error("regression_get: fuel exhausted");
}

}  // namespace upl
