#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ucq/morphism.hpp"
#include "ucq/query.hpp"

namespace ucq {

struct VirtualAtom {
  std::string rel_name;        // fresh symbol, assigned at finalization
  RelId rel = -1;              // id past the schema's relations
  std::vector<VarId> args;     // consumer scope, exactly the witness's v1
  ProvidesWitness witness;
  int depth = 0;               // instantiation-order rank
};

struct UnionExtension {
  int cq = -1;
  std::vector<VirtualAtom> atoms;

  std::vector<Atom> as_atoms() const;
};

struct Certificate {
  std::vector<UnionExtension> extensions;  // one per disjunct, in order
};

enum class Tractability { Tractable, Intractable, Unknown };

struct Verdict {
  Tractability kind = Tractability::Unknown;
  // The redundancy-free query the verdict and certificate refer to;
  // answer-equivalent to the input.
  UCQ query;
  std::optional<Certificate> certificate;
  std::string theorem;       // which result the verdict rests on
  std::string hypothesis;    // mat-mul | hyperclique | 4-clique
  std::string witness_text;  // hardness witness description
  std::string notes;
};

// Fixpoint search for per-disjunct free-connex union extensions. Providers
// start as the base disjuncts; each round admits the extensions adopted so
// far, whose virtual atoms can make more variable sets connex. Candidate
// virtual atoms are provided sets, contraction-path sets and union-guard tree
// nodes. `notes`, when given, records why the search stopped.
std::optional<Certificate> union_extension_search(const UCQ& q,
                                                  std::string* notes = nullptr);

// A disjunct such that every other disjunct either has no body-homomorphism
// into it or is body-isomorphic to it (a source SCC of the body-hom digraph).
int select_pivot(const UCQ& q);

struct GuardViolation {
  FreePath path;
  VarId var = -1;  // bypass check only
};

// var(P) ⊆ free(other) for every free-path P of owner. Heads are those of the
// normalized multi-head form.
std::optional<GuardViolation> free_path_guarded(const MultiHeadCQ& m, int owner,
                                                int other);
// Every variable occurring in two subsequent P-atoms is free in other.
std::optional<GuardViolation> bypass_guarded(const MultiHeadCQ& m, int owner,
                                             int other);

struct UnionGuard {
  FreePath path;
  std::vector<VarSet> sets;  // {z0,zk+1} plus the triple tree nodes
  struct Node {
    int a, b, c;     // positions in path
    int parent;      // -1 for root
  };
  std::vector<Node> tree;
};

// Interval DP: guardable(a,c) iff c=a+1 or some head covers {za,zb,zc} with
// guardable(a,b) and guardable(b,c); a guard needs {z0,zk+1} head-covered too.
std::optional<UnionGuard> union_guard_search(const MultiHeadCQ& m,
                                             const FreePath& p);
bool check_union_guard(const MultiHeadCQ& m, const FreePath& p,
                       const UnionGuard& g);

// var(P)-connex body and no other free-path of the same disjunct shares a
// variable with P.
bool is_isolated(const MultiHeadCQ& m, int owner, const FreePath& p);

Verdict classify(const UCQ& q);

std::string verdict_to_json(const UCQ& q, const Verdict& v);

}  // namespace ucq
