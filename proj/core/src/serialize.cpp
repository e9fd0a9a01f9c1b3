#include "upl/serialize.hpp"

#include <stdexcept>

#include "upl/parser.hpp"

namespace upl {

namespace {

json terms(const std::vector<Term>& ts) {
  json a = json::array();
  for (const auto& t : ts) a.push_back(print_term(t));
  return a;
}

TypingRule rule_from_name(const std::string& s) {
  for (auto r : {TypingRule::Var, TypingRule::ConstructorIntro, TypingRule::LamIntro, TypingRule::AppElim,
                 TypingRule::MeetIntro, TypingRule::Subsume, TypingRule::DefinedMatch, TypingRule::DefinedNoMatch})
    if (s == rule_name(r)) return r;
  throw std::invalid_argument("unknown rule tag '" + s + "'");
}

}  // namespace

json to_json(const TypingContext& g) {
  json a = json::array();
  for (const auto& [x, u] : g.bindings()) a.push_back({{"var", x}, {"type", print_nbhd(u)}});
  return a;
}

json to_json(const Derivation& d) {
  json j;
  j["rule"] = rule_name(d.rule);
  j["context"] = to_json(d.ctx);
  j["subject"] = print_term(d.subject);
  j["type"] = print_nbhd(d.type);
  if (!d.arg_types.empty()) {
    json a = json::array();
    for (const auto& u : d.arg_types) a.push_back(print_nbhd(u));
    j["arg_types"] = a;
  }
  if (d.rewrite_rule) j["rewrite_rule"] = *d.rewrite_rule;
  if (!d.assignment.empty()) {
    json w = json::object();
    for (const auto& [x, u] : d.assignment) w[x] = print_nbhd(u);
    j["assignment"] = w;
  }
  json ps = json::array();
  for (const auto& p : d.premises) ps.push_back(to_json(*p));
  j["premises"] = ps;
  return j;
}

DerivPtr derivation_from_json(const json& j, const Signature& sig) {
  if (!j.is_object()) throw std::invalid_argument("derivation node must be an object");
  auto d = std::make_shared<Derivation>();
  d->rule = rule_from_name(j.at("rule").get<std::string>());
  for (const auto& b : j.at("context"))
    d->ctx.push(b.at("var").get<std::string>(), parse_nbhd(b.at("type").get<std::string>(), sig));
  d->subject = parse_term(j.at("subject").get<std::string>(), sig);
  d->type = parse_nbhd(j.at("type").get<std::string>(), sig);
  if (j.contains("arg_types"))
    for (const auto& u : j["arg_types"]) d->arg_types.push_back(parse_nbhd(u.get<std::string>(), sig));
  if (j.contains("rewrite_rule")) d->rewrite_rule = j["rewrite_rule"].get<std::size_t>();
  if (j.contains("assignment"))
    for (const auto& [x, u] : j["assignment"].items()) d->assignment.emplace(x, parse_nbhd(u.get<std::string>(), sig));
  for (const auto& p : j.at("premises")) d->premises.push_back(derivation_from_json(p, sig));
  return d;
}

json to_json(const SnVerdict& v) {
  if (auto* s = std::get_if<SN>(&v))
    return {{"verdict", "SN"}, {"longest_path", s->longest_path}, {"normal_forms", terms(s->normal_forms)}};
  if (auto* n = std::get_if<NotSN>(&v))
    return {{"verdict", "NotSN"}, {"cycle", terms(n->cycle)}, {"cycle_length", n->cycle.size() - 1}};
  return {{"verdict", "Unknown"}, {"fuel_spent", std::get<Unknown>(v).fuel_spent}};
}

json to_json(const Certificate& c) {
  json j{{"certified", c.certified}, {"search", outcome_name(c.search)}};
  if (c.certified) {
    j["type"] = print_nbhd(c.type);
    j["derivation"] = to_json(*c.derivation);
  } else {
    j["reason"] = c.reason;
  }
  return j;
}

json to_json(const ModelReport& r) {
  json entries = json::array();
  for (const auto& e : r.entries) {
    json checks = json::array();
    for (const auto& c : e.checks) checks.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
    entries.push_back({{"term", print_term(e.term)}, {"status", entry_status_name(e.status)}, {"checks", checks}});
  }
  return {{"depth", r.depth},
          {"delta", r.delta},
          {"holds", r.count(EntryStatus::Holds)},
          {"depth_insufficient", r.count(EntryStatus::DepthInsufficient)},
          {"violated", r.count(EntryStatus::Violated)},
          {"entries", entries}};
}

json to_json(const CrReport& r) {
  return {{"cr1", r.cr1}, {"cr2", r.cr2}, {"cr3", r.cr3}, {"violations", r.violations}};
}

json to_json(const ProbeResult& r) {
  return {{"ok", r.ok}, {"instances", r.instances}, {"violations", r.violations}};
}

json to_json(const ScriptReport& r) {
  static const char* kinds[] = {"constant", "assume", "check", "reject"};
  json entries = json::array();
  for (const auto& e : r.entries)
    entries.push_back({{"line", e.directive.line},
                       {"kind", kinds[static_cast<int>(e.directive.kind)]},
                       {"text", e.directive.text},
                       {"verdict", verdict_name(e.result.verdict)},
                       {"reason", e.result.reason},
                       {"passed", e.passed}});
  return {{"ok", r.ok()}, {"failures", r.failures()}, {"entries", entries}};
}

}  // namespace upl
