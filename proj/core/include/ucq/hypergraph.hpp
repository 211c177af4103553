#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ucq/query.hpp"

namespace ucq {

struct Hypergraph {
  int nvars = 0;
  std::vector<VarSet> edges;                 // nonempty, deduplicated
  std::vector<std::vector<int>> edge_atoms;  // originating atom indices per edge

  VarSet vertices() const;
  // Adjacency over vertices (neighbors share an edge).
  VarSet neighbors(VarId v) const;
};

// One edge per atom; atoms with identical variable sets collapse to one edge
// with the provenance of all of them. `extra` atoms index from q.body.size().
Hypergraph hypergraph_of(const CQ& q);
Hypergraph hypergraph_of(const CQ& q, const std::vector<Atom>& extra);

struct JoinTree {
  std::vector<VarSet> nodes;
  std::vector<std::pair<int, int>> edges;
};

// Connected, acyclic as a graph, and running intersection.
bool check_join_tree(const JoinTree& t);

// GYO ear removal; lowest-index ear first, lowest-index witness first.
// Returns a join tree over the hypergraph's edges iff one exists.
std::optional<JoinTree> gyo_join_tree(const Hypergraph& h);

bool is_acyclic(const Hypergraph& h);
// Acyclicity of (V, E ∪ {s}).
bool acyclic_with(const Hypergraph& h, VarSet s);

struct ExtConnexTree {
  std::vector<VarSet> nodes;
  std::vector<int> cover_atom;  // atom whose edge covers each node
  std::vector<std::pair<int, int>> edges;
  std::vector<char> connex;     // connex-subtree membership per node
  VarSet s = 0;

  std::vector<int> connex_nodes() const;
};

// Join tree of an inclusive extension with a connected subtree holding exactly
// the variables `s`. Exists iff both E and E ∪ {s} are acyclic. The
// constructed tree is validated against the invariants before returning.
std::optional<ExtConnexTree> ext_connex_tree(const Hypergraph& h, VarSet s);

bool check_ext_connex_tree(const ExtConnexTree& t, const Hypergraph& h);

struct FreePath {
  std::vector<VarId> vars;  // (x, z1..zk, y), k >= 1
  int owner = -1;           // disjunct id, when applicable

  VarSet var_set() const;
};

// All chordless paths from a free variable through existential variables to a
// free variable. Canonical orientation: smaller endpoint first.
std::vector<FreePath> free_paths_of(const Hypergraph& h, VarSet free);
std::vector<FreePath> free_paths(const UCQ& q, int disjunct);

// Free-connexity with its ext-free(Q)-connex tree as certificate.
std::optional<ExtConnexTree> free_connex_tree(const Hypergraph& h, VarSet free);
std::optional<ExtConnexTree> is_free_connex(const UCQ& q, int disjunct);

// Applies contraction steps to the tree path between `from` and `to` until no
// subpath admits one; returns the updated tree and the contracted node path.
std::pair<JoinTree, std::vector<int>> contract_path(const JoinTree& t, int from,
                                                    int to);

// Serialization for documentation and golden files; stable node numbering.
std::string tree_to_json(const ExtConnexTree& t,
                         const std::vector<std::string>& var_names);
std::string tree_to_dot(const ExtConnexTree& t,
                        const std::vector<std::string>& var_names);

}  // namespace ucq
