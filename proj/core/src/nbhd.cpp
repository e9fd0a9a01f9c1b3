#include "upl/nbhd.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <stdexcept>

#include "lexer.hpp"

namespace upl {

namespace {

std::size_t mix(std::size_t h, std::size_t v) { return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2)); }

const std::shared_ptr<const detail::NfNode>& nabla_node() {
  static const auto node = std::make_shared<const detail::NfNode>();
  return node;
}

}  // namespace

const char* class_name(NbhdClass c) {
  switch (c) {
    case NbhdClass::Nabla: return "nabla";
    case NbhdClass::Constructor: return "constructor";
    case NbhdClass::Arrows: return "arrows";
  }
  return "?";
}

NbhdNF::NbhdNF() : node_(nabla_node()) {}

NbhdNF NbhdNF::nabla() { return NbhdNF(); }

NbhdNF NbhdNF::con(std::string ctor, std::vector<NbhdNF> args) {
  auto n = std::make_shared<detail::NfNode>();
  n->cls = NbhdClass::Constructor;
  n->hash = mix(std::hash<std::string>{}(ctor), 1);
  int c = 0;
  for (const auto& a : args) {
    c = std::max(c, a.complexity());
    n->hash = mix(n->hash, a.hash());
  }
  n->complexity = 1 + c;
  n->ctor = std::move(ctor);
  n->args = std::move(args);
  return NbhdNF(n);
}

NbhdNF NbhdNF::arrow(NbhdNF dom, NbhdNF cod) { return arrows({{std::move(dom), std::move(cod)}}); }

NbhdNF NbhdNF::arrows(std::vector<NfArrow> set) {
  if (set.empty()) throw std::invalid_argument("empty arrow set");
  std::sort(set.begin(), set.end());
  set.erase(std::unique(set.begin(), set.end()), set.end());
  auto n = std::make_shared<detail::NfNode>();
  n->cls = NbhdClass::Arrows;
  n->hash = 7;
  int c = 0;
  for (const auto& [d, r] : set) {
    c = std::max({c, d.complexity(), r.complexity()});
    n->hash = mix(mix(n->hash, d.hash()), r.hash());
  }
  n->complexity = 1 + c;
  n->arrows = std::move(set);
  return NbhdNF(n);
}

NbhdClass NbhdNF::cls() const { return node_->cls; }
const std::string& NbhdNF::ctor() const { return node_->ctor; }
const std::vector<NbhdNF>& NbhdNF::args() const { return node_->args; }
const std::vector<NfArrow>& NbhdNF::arrow_set() const { return node_->arrows; }
int NbhdNF::complexity() const { return node_->complexity; }
std::size_t NbhdNF::hash() const { return node_->hash; }

int compare(const NbhdNF& a, const NbhdNF& b) {
  if (a.node_ == b.node_) return 0;
  if (a.cls() != b.cls()) return a.cls() < b.cls() ? -1 : 1;
  switch (a.cls()) {
    case NbhdClass::Nabla:
      return 0;
    case NbhdClass::Constructor: {
      if (int c = a.ctor().compare(b.ctor()); c != 0) return c < 0 ? -1 : 1;
      if (a.args().size() != b.args().size()) return a.args().size() < b.args().size() ? -1 : 1;
      for (std::size_t i = 0; i < a.args().size(); ++i)
        if (int c = compare(a.args()[i], b.args()[i]); c != 0) return c;
      return 0;
    }
    case NbhdClass::Arrows: {
      const auto& x = a.arrow_set();
      const auto& y = b.arrow_set();
      for (std::size_t i = 0; i < std::min(x.size(), y.size()); ++i) {
        if (int c = compare(x[i].first, y[i].first); c != 0) return c;
        if (int c = compare(x[i].second, y[i].second); c != 0) return c;
      }
      if (x.size() != y.size()) return x.size() < y.size() ? -1 : 1;
      return 0;
    }
  }
  return 0;
}

NbhdNF normalize_nbhd(const Nbhd& u) {
  switch (u.kind) {
    case Nbhd::Kind::Nabla:
      return NbhdNF::nabla();
    case Nbhd::Kind::Con: {
      std::vector<NbhdNF> args;
      for (const auto& c : u.children) args.push_back(normalize_nbhd(c));
      return NbhdNF::con(u.ctor, std::move(args));
    }
    case Nbhd::Kind::Arrow:
      return NbhdNF::arrow(normalize_nbhd(u.children[0]), normalize_nbhd(u.children[1]));
    case Nbhd::Kind::Meet:
      return meet(normalize_nbhd(u.children[0]), normalize_nbhd(u.children[1]));
  }
  return NbhdNF::nabla();
}

Nbhd embed(const NbhdNF& u) {
  switch (u.cls()) {
    case NbhdClass::Nabla:
      return Nbhd::nabla();
    case NbhdClass::Constructor: {
      std::vector<Nbhd> args;
      for (const auto& a : u.args()) args.push_back(embed(a));
      return Nbhd::con(u.ctor(), std::move(args));
    }
    case NbhdClass::Arrows: {
      std::optional<Nbhd> acc;
      for (const auto& [d, c] : u.arrow_set()) {
        Nbhd a = Nbhd::arrow(embed(d), embed(c));
        acc = acc ? Nbhd::meet(std::move(*acc), std::move(a)) : std::move(a);
      }
      return *acc;
    }
  }
  return Nbhd::nabla();
}

NbhdNF meet(const NbhdNF& a, const NbhdNF& b) {
  if (a.is_nabla() || b.is_nabla()) return NbhdNF::nabla();
  if (a.is_con() && b.is_con()) {
    if (a.ctor() != b.ctor() || a.args().size() != b.args().size()) return NbhdNF::nabla();
    std::vector<NbhdNF> args;
    for (std::size_t i = 0; i < a.args().size(); ++i) args.push_back(meet(a.args()[i], b.args()[i]));
    return NbhdNF::con(a.ctor(), std::move(args));
  }
  if (a.is_arrows() && b.is_arrows()) {
    if (a == b) return a;
    auto set = a.arrow_set();
    set.insert(set.end(), b.arrow_set().begin(), b.arrow_set().end());
    return NbhdNF::arrows(std::move(set));
  }
  return NbhdNF::nabla();
}

NbhdNF meet_all(const std::vector<NbhdNF>& us) {
  if (us.empty()) throw std::invalid_argument("meet of an empty family");
  NbhdNF acc = us.front();
  for (std::size_t i = 1; i < us.size(); ++i) acc = meet(acc, us[i]);
  return acc;
}

namespace {

/// Indices of the arrows whose domain contains u.
std::vector<std::size_t> covering(const std::vector<NfArrow>& arrows, const NbhdNF& u) {
  std::vector<std::size_t> j;
  for (std::size_t i = 0; i < arrows.size(); ++i)
    if (leq(u, arrows[i].first)) j.push_back(i);
  return j;
}

NbhdNF meet_codomains(const std::vector<NfArrow>& arrows, const std::vector<std::size_t>& j) {
  NbhdNF acc = arrows[j.front()].second;
  for (std::size_t k = 1; k < j.size(); ++k) acc = meet(acc, arrows[j[k]].second);
  return acc;
}

bool arrow_covered(const std::vector<NfArrow>& x, const NbhdNF& u, const NbhdNF& v) {
  auto j = covering(x, u);
  return !j.empty() && leq(meet_codomains(x, j), v);
}

}  // namespace

bool leq(const NbhdNF& a, const NbhdNF& b) {
  if (a.is_nabla()) return true;
  if (b.is_nabla()) return false;
  if (a == b) return true;
  if (a.is_con() && b.is_con()) {
    if (a.ctor() != b.ctor() || a.args().size() != b.args().size()) return false;
    for (std::size_t i = 0; i < a.args().size(); ++i)
      if (!leq(a.args()[i], b.args()[i])) return false;
    return true;
  }
  if (a.is_arrows() && b.is_arrows()) {
    for (const auto& [u, v] : b.arrow_set())
      if (!arrow_covered(a.arrow_set(), u, v)) return false;
    return true;
  }
  return false;
}

bool eq(const NbhdNF& a, const NbhdNF& b) { return a == b || (leq(a, b) && leq(b, a)); }

std::vector<std::size_t> continuity_witness(const std::vector<NfArrow>& arrows, const NbhdNF& u, const NbhdNF& v) {
  if (arrows.empty() || !arrow_covered(arrows, u, v))
    throw std::invalid_argument("continuity_witness: arrow set is not included in " + print_nbhd(NbhdNF::arrow(u, v)));
  return covering(arrows, u);
}

namespace {

bool match_into(const Pattern& p, const NbhdNF& u, NbhdAssignment& out) {
  if (p.is_var()) {
    out[p.name()] = u;
    return true;
  }
  if (!u.is_con() || u.ctor() != p.name() || u.args().size() != p.args().size()) return false;
  for (std::size_t i = 0; i < p.args().size(); ++i)
    if (!match_into(p.args()[i], u.args()[i], out)) return false;
  return true;
}

}  // namespace

std::optional<NbhdAssignment> match_nbhd(const Pattern& p, const NbhdNF& u) {
  NbhdAssignment a;
  if (!match_into(p, u, a)) return std::nullopt;
  return a;
}

std::optional<NbhdAssignment> match_nbhds(const std::vector<Pattern>& ps, const std::vector<NbhdNF>& us) {
  if (ps.size() != us.size()) return std::nullopt;
  NbhdAssignment a;
  for (std::size_t i = 0; i < ps.size(); ++i)
    if (!match_into(ps[i], us[i], a)) return std::nullopt;
  return a;
}

NbhdNF instantiate_pattern(const Pattern& p, const NbhdAssignment& w) {
  if (p.is_var()) {
    auto it = w.find(p.name());
    return it == w.end() ? NbhdNF::nabla() : it->second;
  }
  std::vector<NbhdNF> args;
  for (const auto& a : p.args()) args.push_back(instantiate_pattern(a, w));
  return NbhdNF::con(p.name(), std::move(args));
}

namespace {

bool plain_ident(const std::string& s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
  });
}

std::string ctor_text(const std::string& c) { return plain_ident(c) ? c : "(" + c + ")"; }

std::string print_nf(const NbhdNF& u);

std::string print_nf_atom(const NbhdNF& u) {
  if (u.is_nabla() || (u.is_con() && u.args().empty())) return print_nf(u);
  return "(" + print_nf(u) + ")";
}

std::string print_nf(const NbhdNF& u) {
  switch (u.cls()) {
    case NbhdClass::Nabla:
      return "!";
    case NbhdClass::Constructor: {
      std::string out = ctor_text(u.ctor());
      for (const auto& a : u.args()) out += " " + print_nf_atom(a);
      return out;
    }
    case NbhdClass::Arrows: {
      const auto& set = u.arrow_set();
      std::string out;
      for (std::size_t i = 0; i < set.size(); ++i) {
        const auto& [d, c] = set[i];
        std::string dom = d.is_arrows() ? "(" + print_nf(d) + ")" : print_nf(d);
        std::string one = dom + " -> " + print_nf(c);
        if (set.size() > 1) one = "(" + one + ")";
        if (i) out += " & ";
        out += one;
      }
      return out;
    }
  }
  return "?";
}

std::string print_raw(const Nbhd& u, int prec) {
  // prec 0: arrow level, 1: meet level, 2: application argument
  switch (u.kind) {
    case Nbhd::Kind::Nabla:
      return "!";
    case Nbhd::Kind::Con: {
      std::string out = ctor_text(u.ctor);
      for (const auto& a : u.children) out += " " + print_raw(a, 2);
      return (prec >= 2 && !u.children.empty()) ? "(" + out + ")" : out;
    }
    case Nbhd::Kind::Arrow: {
      std::string out = print_raw(u.children[0], 1) + " -> " + print_raw(u.children[1], 0);
      return prec >= 1 ? "(" + out + ")" : out;
    }
    case Nbhd::Kind::Meet: {
      std::string out = print_raw(u.children[0], 1) + " & " + print_raw(u.children[1], 2);
      return prec >= 2 ? "(" + out + ")" : out;
    }
  }
  return "?";
}

using detail::Tok;
using detail::TokenStream;

const char* nbhd_op(Tok t) {
  switch (t) {
    case Tok::Le: return "<=";
    case Tok::Plus: return "+";
    case Tok::Star: return "*";
    default: return nullptr;
  }
}

class NbhdParser {
 public:
  NbhdParser(TokenStream& ts, const Signature& sig) : ts_(ts), sig_(sig) {}

  Nbhd expr() {
    Nbhd lhs = meet_level();
    if (ts_.accept(Tok::Arrow)) return Nbhd::arrow(std::move(lhs), expr());
    return lhs;
  }

 private:
  Nbhd meet_level() {
    Nbhd acc = app();
    while (ts_.accept(Tok::Amp)) acc = Nbhd::meet(std::move(acc), app());
    return acc;
  }

  std::optional<std::string> ctor_head() {
    if (ts_.at(Tok::Ident)) return ts_.peek().text;
    if (ts_.at(Tok::LParen) && nbhd_op(ts_.peek(1).kind) && ts_.peek(2).kind == Tok::RParen)
      return std::string(nbhd_op(ts_.peek(1).kind));
    return std::nullopt;
  }

  int arity_of(const std::string& c) {
    if (!sig_.is_constructor(c)) ts_.fail("'" + c + "' is not a constructor");
    return *sig_.arity(c);
  }

  void skip_head() {
    if (ts_.at(Tok::Ident)) {
      ts_.next();
    } else {
      ts_.next();
      ts_.next();
      ts_.next();
    }
  }

  Nbhd app() {
    if (auto c = ctor_head()) {
      int k = arity_of(*c);
      skip_head();
      std::vector<Nbhd> args;
      for (int i = 0; i < k; ++i) args.push_back(atom());
      return Nbhd::con(*c, std::move(args));
    }
    return atom();
  }

  Nbhd atom() {
    if (ts_.accept(Tok::Bang)) return Nbhd::nabla();
    if (auto c = ctor_head()) {
      if (arity_of(*c) != 0) ts_.fail("constructor '" + *c + "' needs arguments; parenthesise it");
      skip_head();
      return Nbhd::con(*c, {});
    }
    if (ts_.accept(Tok::LParen)) {
      Nbhd inner = expr();
      ts_.expect(Tok::RParen);
      return inner;
    }
    ts_.fail("expected a neighbourhood, found " + TokenStream::describe(ts_.peek()));
  }

  TokenStream& ts_;
  const Signature& sig_;
};

}  // namespace

std::string print_nbhd(const NbhdNF& u) { return print_nf(u); }
std::string print_nbhd(const Nbhd& u) { return print_raw(u, 0); }

Nbhd parse_nbhd_raw(const std::string& text, const Signature& sig) {
  TokenStream ts(detail::lex(text));
  NbhdParser p(ts, sig);
  Nbhd u = p.expr();
  if (!ts.at(Tok::End)) ts.fail("unexpected " + TokenStream::describe(ts.peek()));
  return u;
}

NbhdNF parse_nbhd(const std::string& text, const Signature& sig) {
  return normalize_nbhd(parse_nbhd_raw(text, sig));
}

std::vector<NbhdNF> nbhd_universe(const Signature& sig, int depth, std::size_t cap) {
  std::vector<NbhdNF> out{NbhdNF::nabla()};
  auto full = [&] { return out.size() >= cap; };
  for (int level = 1; level <= depth && !full(); ++level) {
    std::vector<NbhdNF> prev = out;
    auto top = [&](const NbhdNF& u) { return u.complexity() == level - 1; };
    std::vector<NbhdNF> fresh;
    auto add = [&](NbhdNF u) {
      if (out.size() + fresh.size() < cap) fresh.push_back(std::move(u));
    };
    if (level == 1)
      for (const auto& [c, ar] : sig.constructors())
        if (ar == 0) add(NbhdNF::con(c, {}));
    for (const auto& [c, ar] : sig.constructors())
      if (ar == 1)
        for (const auto& u : prev)
          if (top(u)) add(NbhdNF::con(c, {u}));
    for (const auto& a : prev)
      for (const auto& b : prev)
        if (top(a) || top(b)) add(NbhdNF::arrow(a, b));
    for (const auto& [c, ar] : sig.constructors())
      if (ar == 2)
        for (const auto& a : prev)
          for (const auto& b : prev)
            if (top(a) || top(b)) add(NbhdNF::con(c, {a, b}));
    out.insert(out.end(), fresh.begin(), fresh.end());
  }
  return out;
}

}  // namespace upl
