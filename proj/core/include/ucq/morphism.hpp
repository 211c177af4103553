#pragma once

#include <optional>
#include <vector>

#include "ucq/hypergraph.hpp"
#include "ucq/query.hpp"

namespace ucq {

struct BodyHom {
  int src = -1, dst = -1;   // disjunct indices
  std::vector<VarId> map;   // size var_count(src), values in dst scope
};

// Atom-preservation check: for every atom R(v̄) of src, R(map(v̄)) is in dst.
bool check_body_hom(const std::vector<Atom>& src_atoms,
                    const std::vector<Atom>& dst_atoms,
                    const std::vector<VarId>& map);

// Complete list of body-homomorphisms, in backtracking order (src atoms in
// order, dst candidates by index). Exponential in query size.
std::vector<std::vector<VarId>> body_homs_atoms(
    const std::vector<Atom>& src_atoms, int src_nvars,
    const std::vector<Atom>& dst_atoms);
std::vector<BodyHom> body_homs(const UCQ& q, int src, int dst);

// A body-isomorphism from disjunct q2 into disjunct q1 (body-homomorphisms in
// both directions exist), or nothing. Both disjuncts must be self-join free.
std::optional<BodyHom> is_body_isomorphic(const UCQ& q, int q1, int q2);

// Containment: disjunct q1 ⊆ disjunct q2, i.e. a homomorphism from q2 to q1
// matching heads positionally.
bool cq_contains(const UCQ& q, int q1, int q2);

struct ProvidesWitness {
  int provider = -1;           // disjunct id
  int provider_atom_count = 0; // prefix of the provider's virtual atoms used
  BodyHom hom;                 // provider -> consumer, over base atoms
  VarSet v2 = 0;               // ⊆ free(provider), h(v2) = v1
  VarSet s = 0;                // v2 ⊆ s ⊆ free(provider), provider s-connex
  VarSet v1 = 0;               // ⊆ var(consumer)
  ExtConnexTree tree;          // ext-s-connex tree of the provider extension
};

bool check_provides_witness(const UCQ& q, const ProvidesWitness& w,
                            const std::vector<Atom>& provider_extra,
                            int consumer);

// First witness that the provider (extended by `provider_extra` virtual atoms,
// which only strengthen connexity) provides `v1` to the consumer, under the
// lexicographic (hom index, v2, s) order. Failure is a value.
std::optional<ProvidesWitness> provides(const UCQ& q, int provider,
                                        const std::vector<Atom>& provider_extra,
                                        int consumer, VarSet v1);

// Every variable set the provider can provide to the consumer, each with its
// first witness under the same order.
std::vector<ProvidesWitness> provided_sets(const UCQ& q, int provider,
                                           const std::vector<Atom>& provider_extra,
                                           int consumer);

// Virtual-atom argument order: image of v2 listed by the provider's head
// positions, first occurrence kept.
std::vector<VarId> witness_args(const UCQ& q, const ProvidesWitness& w);

}  // namespace ucq
