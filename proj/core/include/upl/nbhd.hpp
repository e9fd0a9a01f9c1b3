#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "upl/signature.hpp"
#include "upl/term.hpp"

namespace upl {

/// Raw neighbourhood syntax: `! | c U1 ... Uk | U -> V | U & V`.
struct Nbhd {
  enum class Kind { Nabla, Con, Arrow, Meet };
  Kind kind = Kind::Nabla;
  std::string ctor;
  std::vector<Nbhd> children;

  static Nbhd nabla() { return {}; }
  static Nbhd con(std::string c, std::vector<Nbhd> args) { return {Kind::Con, std::move(c), std::move(args)}; }
  static Nbhd arrow(Nbhd dom, Nbhd cod) { return {Kind::Arrow, {}, {std::move(dom), std::move(cod)}}; }
  static Nbhd meet(Nbhd a, Nbhd b) { return {Kind::Meet, {}, {std::move(a), std::move(b)}}; }
};

enum class NbhdClass { Nabla, Constructor, Arrows };

const char* class_name(NbhdClass c);

namespace detail {
struct NfNode;
}

class NbhdNF;
using NfArrow = std::pair<NbhdNF, NbhdNF>;

/// Neighbourhood in normal form: nabla, a constructor applied to normal
/// forms, or a nonempty set of arrows read as their intersection. Arrow
/// sets are kept sorted and free of structural duplicates, so structural
/// equality is a cheap first test; formal equality is `eq`.
class NbhdNF {
 public:
  NbhdNF();

  static NbhdNF nabla();
  static NbhdNF con(std::string ctor, std::vector<NbhdNF> args);
  static NbhdNF arrow(NbhdNF dom, NbhdNF cod);
  /// Throws std::invalid_argument on an empty set.
  static NbhdNF arrows(std::vector<NfArrow> set);

  NbhdClass cls() const;
  bool is_nabla() const { return cls() == NbhdClass::Nabla; }
  bool is_con() const { return cls() == NbhdClass::Constructor; }
  bool is_arrows() const { return cls() == NbhdClass::Arrows; }

  const std::string& ctor() const;
  const std::vector<NbhdNF>& args() const;
  const std::vector<NfArrow>& arrow_set() const;

  int complexity() const;
  std::size_t hash() const;

  /// Structural total order.
  friend int compare(const NbhdNF& a, const NbhdNF& b);
  friend bool operator==(const NbhdNF& a, const NbhdNF& b) { return compare(a, b) == 0; }
  friend bool operator!=(const NbhdNF& a, const NbhdNF& b) { return compare(a, b) != 0; }
  friend bool operator<(const NbhdNF& a, const NbhdNF& b) { return compare(a, b) < 0; }

 private:
  explicit NbhdNF(std::shared_ptr<const detail::NfNode> n) : node_(std::move(n)) {}
  std::shared_ptr<const detail::NfNode> node_;
};

namespace detail {
struct NfNode {
  NbhdClass cls = NbhdClass::Nabla;
  std::string ctor;
  std::vector<NbhdNF> args;
  std::vector<NfArrow> arrows;
  int complexity = 0;
  std::size_t hash = 0;
};
}  // namespace detail

struct NbhdHash {
  std::size_t operator()(const NbhdNF& u) const { return u.hash(); }
};

NbhdNF normalize_nbhd(const Nbhd& u);
/// Back to raw syntax, arrows joined with Meet.
Nbhd embed(const NbhdNF& u);

NbhdNF meet(const NbhdNF& a, const NbhdNF& b);
/// Meet of a nonempty list; throws std::invalid_argument when empty.
NbhdNF meet_all(const std::vector<NbhdNF>& us);

bool leq(const NbhdNF& a, const NbhdNF& b);
bool eq(const NbhdNF& a, const NbhdNF& b);
inline NbhdClass classify(const NbhdNF& a) { return a.cls(); }

/// J = { i | u <= dom_i } for arrows whose intersection is below u -> v.
/// Throws std::invalid_argument when that inclusion does not hold.
std::vector<std::size_t> continuity_witness(const std::vector<NfArrow>& arrows, const NbhdNF& u, const NbhdNF& v);

using NbhdAssignment = std::map<std::string, NbhdNF>;
std::optional<NbhdAssignment> match_nbhd(const Pattern& p, const NbhdNF& u);
std::optional<NbhdAssignment> match_nbhds(const std::vector<Pattern>& ps, const std::vector<NbhdNF>& us);

/// The instance p(W1, ..., Wn) of a pattern.
NbhdNF instantiate_pattern(const Pattern& p, const NbhdAssignment& w);

std::string print_nbhd(const NbhdNF& u);
std::string print_nbhd(const Nbhd& u);

/// Parses `! | c U1 ... Uk | U -> V | U & V | (U)`; `&` binds tighter
/// than `->`, which associates to the right. Constructor arities come
/// from `sig`. Throws ParseError.
Nbhd parse_nbhd_raw(const std::string& text, const Signature& sig);
NbhdNF parse_nbhd(const std::string& text, const Signature& sig);

/// Neighbourhoods ordered by complexity, built level by level from the
/// constructors of `sig` and single arrows, truncated after `cap`
/// elements. Growing `depth` or `cap` only extends the list.
std::vector<NbhdNF> nbhd_universe(const Signature& sig, int depth, std::size_t cap);

}  // namespace upl
