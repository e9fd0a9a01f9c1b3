#pragma once

#include <json.hpp>

#include "upl/mltt.hpp"
#include "upl/oracle.hpp"
#include "upl/reduction.hpp"
#include "upl/semantics.hpp"
#include "upl/typing.hpp"

namespace upl {

using json = nlohmann::json;

/// Derivation trees. Terms and neighbourhoods are stored in their printed
/// concrete syntax; see docs/derivation-json.md.
json to_json(const Derivation& d);
/// Throws std::invalid_argument (or ParseError) on a malformed document.
DerivPtr derivation_from_json(const json& j, const Signature& sig);

json to_json(const TypingContext& g);
json to_json(const SnVerdict& v);
json to_json(const Certificate& c);
json to_json(const ModelReport& r);
json to_json(const CrReport& r);
json to_json(const ProbeResult& r);
json to_json(const ScriptReport& r);

}  // namespace upl
