#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "ucq/database.hpp"
#include "ucq/hypergraph.hpp"
#include "ucq/query.hpp"
#include "ucq/testkit.hpp"

namespace ucq::testing {

inline UCQ qparse(const std::string& text) { return parse_ucq(text); }

// Database from literal rows, e.g. {{"R1", {{"1","2"},{"2","3"}}}}.
inline Database make_db(
    const std::vector<std::pair<std::string,
                                std::vector<std::vector<std::string>>>>& rels,
    const UCQ* schema = nullptr) {
  Database db;
  if (schema)
    for (size_t r = 0; r < schema->rel_names.size(); ++r)
      db.add_relation(schema->rel_names[r], schema->rel_arity[r]);
  for (const auto& [name, rows] : rels) {
    int arity = rows.empty() ? (schema ? schema->rel_arity[schema->rel_id(name)]
                                       : 0)
                             : static_cast<int>(rows[0].size());
    int rid = db.find_relation(name) >= 0 ? db.find_relation(name)
                                          : db.add_relation(name, arity);
    for (const auto& row : rows) {
      std::vector<ValId> t;
      for (const auto& v : row) t.push_back(db.dict.intern(v));
      db.relations[rid].insert(std::move(t));
    }
  }
  return db;
}

inline std::set<std::vector<std::string>> named(
    const Database& db, const std::set<std::vector<ValId>>& rows) {
  std::set<std::vector<std::string>> out;
  for (const auto& r : rows) {
    std::vector<std::string> s;
    for (ValId v : r) s.push_back(db.dict.str(v));
    out.insert(std::move(s));
  }
  return out;
}

inline VarId vid(const CQ& cq, const std::string& name) {
  for (size_t i = 0; i < cq.var_names.size(); ++i)
    if (cq.var_names[i] == name) return static_cast<VarId>(i);
  return -1;
}

inline VarSet vset(const CQ& cq, const std::vector<std::string>& names) {
  VarSet s = 0;
  for (const auto& n : names) s |= var_bit(vid(cq, n));
  return s;
}

inline std::vector<std::string> vnames(const CQ& cq,
                                       const std::vector<VarId>& ids) {
  std::vector<std::string> out;
  for (VarId v : ids) out.push_back(cq.var_names[v]);
  return out;
}

// All labeled trees on n nodes via Prüfer sequences (n^(n-2) of them).
inline std::vector<std::vector<std::pair<int, int>>> all_trees(int n) {
  std::vector<std::vector<std::pair<int, int>>> out;
  if (n == 1) {
    out.push_back({});
    return out;
  }
  std::vector<int> seq(n - 2, 0);
  while (true) {
    // decode
    std::vector<int> degree(n, 1);
    for (int x : seq) degree[x]++;
    std::vector<std::pair<int, int>> edges;
    std::vector<int> s = seq;
    std::set<int> leaves;
    for (int i = 0; i < n; ++i)
      if (degree[i] == 1) leaves.insert(i);
    for (int x : s) {
      int leaf = *leaves.begin();
      leaves.erase(leaves.begin());
      edges.emplace_back(leaf, x);
      if (--degree[x] == 1) leaves.insert(x);
    }
    int a = *leaves.begin(), b = *std::next(leaves.begin());
    edges.emplace_back(a, b);
    out.push_back(std::move(edges));
    // increment
    int k = n - 3;
    while (k >= 0 && seq[k] == n - 1) seq[k--] = 0;
    if (k < 0) break;
    seq[k]++;
  }
  return out;
}

// Exhaustive acyclicity: some labeled tree over the edges satisfies running
// intersection. Independent of the ear-removal implementation.
inline bool exhaustive_acyclic(const Hypergraph& h) {
  const int n = static_cast<int>(h.edges.size());
  if (n <= 32 && n >= 1) {
    for (const auto& edges : all_trees(n)) {
      JoinTree t{h.edges, edges};
      if (check_join_tree(t)) return true;
    }
    return false;
  }
  return false;
}

// Brute-force chordless free-path enumeration over all variable sequences.
inline std::set<std::vector<VarId>> exhaustive_free_paths(const Hypergraph& h,
                                                          VarSet free) {
  std::set<std::vector<VarId>> out;
  std::vector<VarId> verts = set_to_vars(h.vertices());
  std::vector<VarSet> nbr(h.nvars, 0);
  for (VarId v : verts) nbr[v] = h.neighbors(v);
  std::function<void(std::vector<VarId>&)> rec = [&](std::vector<VarId>& seq) {
    if (seq.size() >= 3 && contains(free, seq.front()) &&
        contains(free, seq.back())) {
      bool interior_existential = true, chordless = true;
      for (size_t i = 1; i + 1 < seq.size(); ++i)
        if (contains(free, seq[i])) interior_existential = false;
      for (size_t i = 0; i < seq.size(); ++i)
        for (size_t j = i + 1; j < seq.size(); ++j) {
          bool adj = contains(nbr[seq[i]], seq[j]);
          if (j == i + 1 ? !adj : adj) chordless = false;
        }
      if (interior_existential && chordless) {
        std::vector<VarId> canon = seq;
        if (canon.front() > canon.back())
          std::reverse(canon.begin(), canon.end());
        out.insert(canon);
      }
    }
    if (seq.size() == verts.size()) return;
    for (VarId v : verts) {
      if (std::find(seq.begin(), seq.end(), v) != seq.end()) continue;
      seq.push_back(v);
      rec(seq);
      seq.pop_back();
    }
  };
  for (VarId v : verts) {
    std::vector<VarId> seq{v};
    rec(seq);
  }
  return out;
}

// Brute-force union-guard existence: every family over subsets of var(P) is
// checked against the definition. Feasible for |var(P)| <= 4.
inline bool exhaustive_union_guard(const MultiHeadCQ& m, const FreePath& p) {
  std::vector<VarId> pv = p.vars;
  const int k = static_cast<int>(pv.size());
  std::vector<VarSet> subsets;
  for (int mask = 1; mask < (1 << k); ++mask) {
    VarSet s = 0;
    for (int i = 0; i < k; ++i)
      if ((mask >> i) & 1) s |= var_bit(pv[i]);
    subsets.push_back(s);
  }
  auto covered = [&](VarSet s) {
    for (size_t i = 0; i < m.heads.size(); ++i)
      if ((s & ~m.head_set(static_cast<int>(i))) == 0) return true;
    return false;
  };
  VarSet ends = var_bit(pv.front()) | var_bit(pv.back());
  const int ns = static_cast<int>(subsets.size());
  for (long long fam = 0; fam < (1LL << ns); ++fam) {
    std::vector<VarSet> u;
    for (int i = 0; i < ns; ++i)
      if ((fam >> i) & 1) u.push_back(subsets[i]);
    if (std::find(u.begin(), u.end(), ends) == u.end()) continue;
    bool ok = true;
    for (VarSet s : u) {
      if (!covered(s)) ok = false;
      for (int a = 0; a < k && ok; ++a)
        for (int c = a + 2; c < k && ok; ++c) {
          if (!contains(s, pv[a]) || !contains(s, pv[c])) continue;
          bool split = false;
          for (int b = a + 1; b < c; ++b) {
            VarSet triple =
                var_bit(pv[a]) | var_bit(pv[b]) | var_bit(pv[c]);
            if (std::find(u.begin(), u.end(), triple) != u.end()) split = true;
          }
          if (!split) ok = false;
        }
      if (!ok) break;
    }
    if (ok) return true;
  }
  return false;
}

// Single-disjunct containment oracle: search small databases for a
// counterexample to "sub ⊆ sup". Returns one if found.
inline std::optional<Database> containment_counterexample(const UCQ& q, int sub,
                                                          int sup,
                                                          int max_constants) {
  // systematic single-tuple-per-relation instances, then random ones
  const int nrel = static_cast<int>(q.rel_names.size());
  std::vector<std::vector<std::vector<ValId>>> options(nrel);
  auto test = [&](const Database& db) {
    auto a = brute_force_eval_cq(q, sub, db);
    auto b = brute_force_eval_cq(q, sup, db);
    for (const auto& t : a)
      if (!b.count(t)) return true;
    return false;
  };
  std::vector<int> pick(nrel, 0);
  std::vector<long long> counts(nrel);
  long long total = 1;
  for (int r = 0; r < nrel; ++r) {
    long long c = 1;
    for (int i = 0; i < q.rel_arity[r]; ++i) c *= max_constants;
    counts[r] = c;
    total *= c;
  }
  if (total <= 1000000) {
    for (long long code = 0; code < total; ++code) {
      long long rest = code;
      Database db;
      for (int r = 0; r < nrel; ++r) {
        int rid = db.add_relation(q.rel_names[r], q.rel_arity[r]);
        long long t = rest % counts[r];
        rest /= counts[r];
        std::vector<ValId> tuple;
        for (int i = 0; i < q.rel_arity[r]; ++i) {
          tuple.push_back(db.dict.intern(std::to_string(t % max_constants)));
          t /= max_constants;
        }
        db.relations[rid].insert(std::move(tuple));
      }
      if (test(db)) return db;
    }
  }
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    Database db = gen_random(seed, q, 3, max_constants);
    if (test(db)) return db;
  }
  return std::nullopt;
}

}  // namespace ucq::testing
