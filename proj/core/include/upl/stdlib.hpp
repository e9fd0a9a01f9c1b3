#pragma once

#include <string>
#include <vector>

#include "upl/signature.hpp"
#include "upl/term.hpp"

namespace upl {

/// Source text of the standard signature (the contents of data/std.sig).
const std::string& standard_signature_text();

/// Declared types of the standard constants as an mltt script (the
/// contents of data/std.tt).
const std::string& standard_declarations_text();

/// Parsed once and cached. Constructor 0 serves both Nat and N1.
const Signature& standard_signature();

/// S^n 0.
Term numeral(int n);
/// Pair (... (Pair 0 e1) ...) en; the empty vector is 0.
Term vec_value(const std::vector<Term>& elems);
/// \B. \H. \K. Phi B H K 0 0
Term dns_term();

/// Normal form of `get B n i 0 v` for v = vec_value(elems), n = |elems|.
/// B is a free variable; it never reaches the head. Throws
/// std::runtime_error if normalisation runs out of fuel.
Term regression_get(int n, int i, const std::vector<Term>& elems, std::size_t fuel = 100000);

}  // namespace upl
