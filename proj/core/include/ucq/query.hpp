#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ucq {

// Variable and relation ids. Variables are scoped per disjunct: VarId 0 of Q1
// and VarId 0 of Q2 are unrelated. Relation symbols are interned per UCQ.
using VarId = int;
using RelId = int;

// Variable sets are bitmasks over a disjunct's VarIds. Query size is fixed,
// so 32 variables per disjunct is plenty; the parser enforces the bound.
using VarSet = std::uint32_t;

constexpr int kMaxVarsPerCq = 32;

inline VarSet var_bit(VarId v) { return VarSet{1} << v; }
inline bool contains(VarSet s, VarId v) { return (s >> v) & 1u; }
int popcount(VarSet s);
// Variables of a set in ascending VarId order.
std::vector<VarId> set_to_vars(VarSet s);

struct Atom {
  RelId rel = -1;
  std::vector<VarId> args;  // repetitions allowed

  VarSet var_set() const;
  bool operator==(const Atom&) const = default;
};

struct CQ {
  std::string name;                    // display name, e.g. "Q1"
  std::vector<std::string> var_names;  // index = VarId
  std::vector<VarId> head;             // ordered, repetitions allowed
  std::vector<Atom> body;

  int var_count() const { return static_cast<int>(var_names.size()); }
  VarSet free_set() const;
  VarSet all_vars() const;
  // No relation symbol occurs twice in the body.
  bool self_join_free() const;
};

struct UCQ {
  std::vector<std::string> rel_names;  // index = RelId
  std::vector<int> rel_arity;
  std::vector<CQ> disjuncts;
  int head_arity = 0;

  RelId rel_id(const std::string& name) const;  // -1 if absent
};

struct ParseError : std::runtime_error {
  int line, column;
  ParseError(const std::string& msg, int line, int column);
};

// Parses a list of rules of the form `Q1(x,y) <- R(x,z), S(z,y).`
// `%` starts a line comment. Variable scopes are per rule; heads are aligned
// by position and must agree in arity. Every head variable must occur in the
// body, and each relation symbol must be used with one arity throughout.
UCQ parse_ucq(const std::string& text);

std::string print_ucq(const UCQ& q);
std::string print_cq(const UCQ& q, const CQ& cq);
std::string print_atom(const UCQ& q, const CQ& cq, const Atom& a);

// Drops every disjunct that is contained in another disjunct. The result is
// answer-equivalent on all databases. Of two equivalent disjuncts the earlier
// one is kept.
UCQ remove_redundant(const UCQ& q);

// A UCQ whose disjuncts all share one body, written over the variable scope
// of the last disjunct, with one head per disjunct.
struct MultiHeadCQ {
  CQ body_owner;                         // heads ignored; carries vars + body
  std::vector<std::vector<VarId>> heads; // one per disjunct, in order
  std::vector<std::string> names;
  // Body-isomorphism from each disjunct's scope into the shared body's scope.
  std::vector<std::vector<VarId>> to_base;

  VarSet head_set(int i) const;
};

// Succeeds iff all disjuncts are pairwise body-isomorphic (they must be
// self-join free for that notion to apply); rewrites every head over the last
// disjunct's body. Failure is a value, not an error.
std::optional<MultiHeadCQ> normalize_body_isomorphic(const UCQ& q);

}  // namespace ucq
