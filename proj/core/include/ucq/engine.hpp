#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "ucq/classifier.hpp"
#include "ucq/database.hpp"
#include "ucq/hypergraph.hpp"

namespace ucq {

// Step model: one step is one index probe, cursor advance, hash insertion or
// tuple emission. Preprocessing bursts and steady-state per-answer work are
// accounted separately; `total` is the virtual clock the pacing runs on.
struct StepCounter {
  std::uint64_t pre = 0;
  std::uint64_t total = 0;
  std::uint64_t cur = 0;
  std::uint64_t answers = 0;
  std::uint64_t max_delay = 0;
  std::uint64_t delay_histogram[32] = {};
  bool in_pre = true;

  void step(std::uint64_t k = 1) {
    total += k;
    if (in_pre)
      pre += k;
    else
      cur += k;
  }
  void emitted();
};

struct EngineError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A disjunct's extension tree bound to concrete relations: per-node relations
// as assignments over the node's variables, bucket indexes keyed by the
// parent-shared variables, and hash sets for membership probes.
struct NodeRel {
  std::vector<VarId> vars;                  // ascending
  std::vector<std::vector<ValId>> rows;     // sorted, deduplicated
  std::vector<int> key_pos;                 // positions of parent-shared vars
  std::unordered_map<std::vector<ValId>, std::pair<int, int>, TupleHash>
      buckets;                              // key values -> row range
  TupleSet row_set;
};

struct BoundTree {
  ExtConnexTree tree;
  std::vector<int> parent;      // rooted at the first connex node
  std::vector<int> order;       // connex prefix first, parents before children
  int n_connex = 0;
  std::vector<NodeRel> rels;
  bool empty = false;           // some relation emptied out

  int var_count = 0;
};

// Virtual relations instantiated so far: rows per (disjunct, virtual atom),
// over the atom's argument order.
using VirtualRels = std::vector<std::vector<std::vector<std::vector<ValId>>>>;

// Binds a disjunct's extension tree: base atoms to database relations by
// name, virtual atoms to instantiated virtual relations, companion nodes to
// projections of their covering atom.
BoundTree bind_tree(const UCQ& q, int disjunct,
                    const std::vector<VirtualAtom>& ext,
                    const ExtConnexTree& tree, const Database& db,
                    const VirtualRels& virt, StepCounter& sc);

// Full reducer: leaf-to-root then root-to-leaf semi-joins. Every surviving
// tuple participates in at least one answer over the whole tree.
void yannakakis_reduce(BoundTree& bt, StepCounter& sc);
// Test hook: drops one row from a node relation to poison consistency checks.
void corrupt_one_row(BoundTree& bt);

// Constant-delay iteration over the connex subtree of a reduced tree. Yields
// assignments over all tree variables; connex variables enumerate, the rest
// extend once per answer when `extend_full` is set.
class CdyEnumerator {
 public:
  CdyEnumerator(const BoundTree& bt, StepCounter& sc, bool extend_full);
  // Assignment over the disjunct's variables (-1 where unbound).
  const std::vector<ValId>* next();

 private:
  bool descend(int level);
  const BoundTree& bt_;
  StepCounter& sc_;
  bool extend_full_;
  std::vector<ValId> assign_;
  std::vector<std::pair<int, int>> cursor_;
  bool started_ = false, done_ = false;
};

// a ∈ q(I): per connex node, the tuple induced by the answer is present in
// the node's reduced relation. Constant time per probe.
bool membership_test(const UCQ& q, int disjunct, const BoundTree& bt,
                     const std::vector<ValId>& answer);

struct VirtualInstantiation {
  std::vector<std::vector<ValId>> relation;            // consumer(I)|v1 modulo
                                                       // consumer-side reduction
  std::vector<std::vector<ValId>> provider_answers;    // M ⊆ provider(I)
};

// Lemma pipeline: CDY on the provider treating S as free, one extension per
// mapping to a full homomorphism, translation through h⁻¹ with the
// consistency check, set-semantics insertion.
VirtualInstantiation instantiate_virtual(const UCQ& q, const Certificate& cert,
                                         int consumer, int atom_idx,
                                         const Database& db,
                                         const VirtualRels& virt,
                                         StepCounter& sc);

// Regularizes a duplicate-producing stream with at most n delay spikes of at
// most p steps and every result produced at most m times into a paced
// duplicate-free enumeration (lookup table + queue). `clock` is the virtual
// step clock the raw stream advances; `base_threshold` returns the budget
// covering the spikes (n·p for declared bounds).
class StreamRegularizer {
 public:
  using Pull = std::function<std::optional<std::vector<ValId>>()>;
  StreamRegularizer(Pull pull, const StepCounter* clock,
                    std::function<std::uint64_t()> base_threshold,
                    std::uint64_t m, std::uint64_t d);
  std::optional<std::vector<ValId>> next();

 private:
  Pull pull_;
  const StepCounter* clock_;
  std::function<std::uint64_t()> base_;
  std::uint64_t m_, d_, emitted_ = 0;
  bool raw_done_ = false;
  std::deque<std::vector<ValId>> queue_;
  std::unordered_map<std::vector<ValId>, int, TupleHash> seen_;
};

// Spec'd wrapper over an explicit raw stream of (answer, step cost) pairs.
std::vector<std::vector<ValId>> cheater_wrapper(
    const std::vector<std::pair<std::vector<ValId>, std::uint64_t>>& raw,
    std::uint64_t n, std::uint64_t m, std::uint64_t p, std::uint64_t d);

enum class EnumMode { General, Interleave };

// Streams the union's answers exactly once each. General mode instantiates
// virtual relations in depth order, emits provider answers on the way, CDYs
// every extension and regularizes the whole stream. Interleave mode (only
// when every extension is empty) runs the two-stream algorithm with constant
// auxiliary memory, recursively over the disjunct list.
class UcqEnumerator {
 public:
  // `corrupt_test_hook` drops one tuple from the first disjunct's reduced
  // relations; negative control for differential checks.
  UcqEnumerator(const UCQ& q, const Certificate& cert, const Database& db,
                EnumMode mode, bool corrupt_test_hook = false);
  ~UcqEnumerator();
  std::optional<std::vector<ValId>> next();
  const StepCounter& stats() const;
  const Database& db() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

std::string stats_to_json(const StepCounter& sc);

}  // namespace ucq
