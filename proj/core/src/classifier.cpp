#include "ucq/classifier.hpp"
#include <functional>

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace ucq {

using nlohmann::json;

std::vector<Atom> UnionExtension::as_atoms() const {
  std::vector<Atom> out;
  for (const VirtualAtom& a : atoms) out.push_back(Atom{a.rel, a.args});
  return out;
}

namespace {

std::vector<Atom> atoms_of(const std::vector<VirtualAtom>& vas) {
  std::vector<Atom> out;
  for (const VirtualAtom& a : vas) out.push_back(Atom{a.rel, a.args});
  return out;
}

std::string path_str(const CQ& cq, const FreePath& p) {
  std::string out = "(";
  for (size_t i = 0; i < p.vars.size(); ++i) {
    if (i) out += ",";
    out += cq.var_names[p.vars[i]];
  }
  return out + ")";
}

// Shared-body extension sets suggested by the two-CQ constructive route:
// iteratively pick a free-path, fully contract a tree path spanning it and
// collect var(P) plus the multiply-occurring variables. Sets are in the
// shared body's scope.
std::vector<VarSet> contraction_sets(const MultiHeadCQ& m) {
  std::vector<VarSet> acc;
  const CQ& body = m.body_owner;
  const int cap = body.var_count() * body.var_count() + 4;
  for (int iter = 0; iter < cap; ++iter) {
    std::vector<Atom> extra;
    for (VarSet s : acc) extra.push_back(Atom{-1, set_to_vars(s)});
    Hypergraph h = hypergraph_of(body, extra);
    auto jt = gyo_join_tree(h);
    if (!jt) break;
    std::optional<FreePath> pick;
    for (size_t d = 0; d < m.heads.size() && !pick; ++d) {
      auto fps = free_paths_of(h, m.head_set(static_cast<int>(d)));
      if (!fps.empty()) pick = fps.front();
    }
    if (!pick) break;
    // tree path between an atom holding the first pair and one holding the last
    VarSet first_pair = var_bit(pick->vars[0]) | var_bit(pick->vars[1]);
    VarSet last_pair = var_bit(pick->vars[pick->vars.size() - 2]) |
                       var_bit(pick->vars.back());
    int from = -1, to = -1;
    for (size_t k = 0; k < jt->nodes.size(); ++k) {
      if (from < 0 && (first_pair & ~jt->nodes[k]) == 0) from = static_cast<int>(k);
      if ((last_pair & ~jt->nodes[k]) == 0) to = static_cast<int>(k);
    }
    if (from < 0 || to < 0) break;
    auto [ct, path] = contract_path(*jt, from, to);
    VarSet vp = pick->var_set();
    VarSet seen_once = 0, seen_more = 0;
    for (int node : path) {
      seen_more |= ct.nodes[node] & seen_once;
      seen_once |= ct.nodes[node];
    }
    vp |= seen_more;
    if (std::find(acc.begin(), acc.end(), vp) != acc.end()) break;  // no progress
    acc.push_back(vp);
  }
  return acc;
}

}  // namespace

std::optional<UnionGuard> union_guard_search(const MultiHeadCQ& m,
                                             const FreePath& p) {
  const int last = static_cast<int>(p.vars.size()) - 1;
  auto covered = [&](VarSet s) {
    for (size_t i = 0; i < m.heads.size(); ++i)
      if ((s & ~m.head_set(static_cast<int>(i))) == 0) return true;
    return false;
  };
  // guardable(a,c) with the smallest splitting b memoized
  std::vector<std::vector<int>> split(last + 1, std::vector<int>(last + 1, -2));
  std::function<bool(int, int)> guardable = [&](int a, int c) -> bool {
    if (c == a + 1) return true;
    int& memo = split[a][c];
    if (memo != -2) return memo >= 0;
    memo = -1;
    for (int b = a + 1; b < c; ++b) {
      VarSet triple =
          var_bit(p.vars[a]) | var_bit(p.vars[b]) | var_bit(p.vars[c]);
      if (!covered(triple)) continue;
      if (guardable(a, b) && guardable(b, c)) {
        memo = b;
        break;
      }
    }
    return memo >= 0;
  };

  VarSet ends = var_bit(p.vars[0]) | var_bit(p.vars[last]);
  if (!covered(ends) || !guardable(0, last)) return std::nullopt;

  UnionGuard g;
  g.path = p;
  g.sets.push_back(ends);
  // materialize the triple tree from the splits
  std::vector<std::pair<std::pair<int, int>, int>> work{{{0, last}, -1}};
  while (!work.empty()) {
    auto [range, parent] = work.back();
    work.pop_back();
    auto [a, c] = range;
    if (c == a + 1) continue;
    int b = split[a][c];
    int id = static_cast<int>(g.tree.size());
    g.tree.push_back(UnionGuard::Node{a, b, c, parent});
    g.sets.push_back(var_bit(p.vars[a]) | var_bit(p.vars[b]) |
                     var_bit(p.vars[c]));
    work.push_back({{a, b}, id});
    work.push_back({{b, c}, id});
  }
  return g;
}

bool check_union_guard(const MultiHeadCQ& m, const FreePath& p,
                       const UnionGuard& g) {
  auto covered = [&](VarSet s) {
    for (size_t i = 0; i < m.heads.size(); ++i)
      if ((s & ~m.head_set(static_cast<int>(i))) == 0) return true;
    return false;
  };
  VarSet ends = var_bit(p.vars[0]) | var_bit(p.vars.back());
  if (std::find(g.sets.begin(), g.sets.end(), ends) == g.sets.end())
    return false;
  auto pos_of = [&](VarId v) {
    for (size_t i = 0; i < p.vars.size(); ++i)
      if (p.vars[i] == v) return static_cast<int>(i);
    return -1;
  };
  for (VarSet u : g.sets) {
    if (!covered(u)) return false;
    if ((u & ~p.var_set()) != 0) return false;
    std::vector<int> pos;
    for (VarId v : set_to_vars(u)) pos.push_back(pos_of(v));
    for (int a : pos)
      for (int c : pos) {
        if (a + 1 >= c) continue;
        bool split_found = false;
        for (int b = a + 1; b < c && !split_found; ++b) {
          VarSet triple =
              var_bit(p.vars[a]) | var_bit(p.vars[b]) | var_bit(p.vars[c]);
          if (std::find(g.sets.begin(), g.sets.end(), triple) != g.sets.end())
            split_found = true;
        }
        if (!split_found) return false;
      }
  }
  return true;
}

std::optional<GuardViolation> free_path_guarded(const MultiHeadCQ& m, int owner,
                                                int other) {
  Hypergraph h = hypergraph_of(m.body_owner);
  VarSet other_free = m.head_set(other);
  for (const FreePath& p : free_paths_of(h, m.head_set(owner)))
    if ((p.var_set() & ~other_free) != 0) return GuardViolation{p, -1};
  return std::nullopt;
}

std::optional<GuardViolation> bypass_guarded(const MultiHeadCQ& m, int owner,
                                             int other) {
  Hypergraph h = hypergraph_of(m.body_owner);
  VarSet other_free = m.head_set(other);
  for (const FreePath& p : free_paths_of(h, m.head_set(owner))) {
    for (size_t i = 1; i + 1 < p.vars.size(); ++i) {
      VarSet prev = var_bit(p.vars[i - 1]) | var_bit(p.vars[i]);
      VarSet next = var_bit(p.vars[i]) | var_bit(p.vars[i + 1]);
      for (size_t a = 0; a < m.body_owner.body.size(); ++a) {
        VarSet va = m.body_owner.body[a].var_set();
        if ((prev & ~va) != 0) continue;
        for (size_t b = 0; b < m.body_owner.body.size(); ++b) {
          if (a == b) continue;
          VarSet vb = m.body_owner.body[b].var_set();
          if ((next & ~vb) != 0) continue;
          for (VarId u : set_to_vars(va & vb))
            if (!contains(other_free, u)) return GuardViolation{p, u};
        }
      }
    }
  }
  return std::nullopt;
}

bool is_isolated(const MultiHeadCQ& m, int owner, const FreePath& p) {
  Hypergraph h = hypergraph_of(m.body_owner);
  if (!is_acyclic(h) || !acyclic_with(h, p.var_set())) return false;
  for (const FreePath& other : free_paths_of(h, m.head_set(owner))) {
    if (other.vars == p.vars) continue;
    if ((other.var_set() & p.var_set()) != 0) return false;
  }
  return true;
}

int select_pivot(const UCQ& q) {
  const int n = static_cast<int>(q.disjuncts.size());
  std::vector<std::vector<bool>> hom(n, std::vector<bool>(n, false));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      hom[i][j] = (i == j) || !body_homs(q, i, j).empty();
  // SCCs via mutual reachability; edges are single homomorphism steps already
  // closed under composition, so reachability equals edge presence.
  std::vector<int> scc(n, -1);
  int nscc = 0;
  for (int i = 0; i < n; ++i) {
    if (scc[i] >= 0) continue;
    scc[i] = nscc;
    for (int j = i + 1; j < n; ++j)
      if (scc[j] < 0 && hom[i][j] && hom[j][i]) scc[j] = nscc;
    ++nscc;
  }
  for (int c = 0; c < nscc; ++c) {
    bool source = true;
    int member = -1;
    for (int i = 0; i < n && source; ++i) {
      if (scc[i] != c) continue;
      if (member < 0) member = i;
      for (int j = 0; j < n; ++j)
        if (scc[j] != c && hom[j][i]) source = false;
    }
    if (source) return member;
  }
  return 0;  // unreachable: a finite digraph has a source SCC
}

namespace {

struct Candidate {
  VarSet v1;
  std::vector<VarId> args;
  ProvidesWitness w;
};

bool candidate_order(const Candidate& a, const Candidate& b) {
  int pa = popcount(a.v1), pb = popcount(b.v1);
  if (pa != pb) return pa > pb;
  return a.v1 < b.v1;
}

}  // namespace

std::optional<Certificate> union_extension_search(const UCQ& q,
                                                  std::string* notes) {
  const int n = static_cast<int>(q.disjuncts.size());
  std::vector<std::vector<VirtualAtom>> chosen(n);
  std::vector<bool> done(n, false);
  for (int i = 0; i < n; ++i) done[i] = is_free_connex(q, i).has_value();

  // Targeted candidate sets, per consumer, in the consumer's scope: the
  // contraction-path sets of the shared body and union-guard tree nodes.
  std::vector<std::vector<std::vector<VarSet>>> blocks(n);
  if (auto m = normalize_body_isomorphic(q); m && n >= 2) {
    std::vector<std::vector<VarId>> from_base(n);
    for (int i = 0; i < n; ++i) {
      from_base[i].assign(m->body_owner.var_count(), -1);
      for (size_t v = 0; v < m->to_base[i].size(); ++v)
        if (m->to_base[i][v] >= 0)  // variables outside the body stay unmapped
          from_base[i][m->to_base[i][v]] = static_cast<VarId>(v);
    }
    auto translate = [&](int i, VarSet s) {
      VarSet out = 0;
      for (VarId v : set_to_vars(s)) out |= var_bit(from_base[i][v]);
      return out;
    };
    std::vector<VarSet> shared = contraction_sets(*m);
    Hypergraph hb = hypergraph_of(m->body_owner);
    for (int i = 0; i < n; ++i) {
      if (!shared.empty()) {
        std::vector<VarSet> blk;
        for (VarSet s : shared) blk.push_back(translate(i, s));
        blocks[i].push_back(std::move(blk));
      }
      for (const FreePath& p : free_paths_of(hb, m->head_set(i))) {
        if (auto g = union_guard_search(*m, p)) {
          std::vector<VarSet> blk;
          for (VarSet s : g->sets)
            if (popcount(s) >= 3) blk.push_back(translate(i, s));
          if (!blk.empty()) blocks[i].push_back(std::move(blk));
        }
      }
    }
  }

  const int max_rounds = 2 * n + 4;
  for (int round = 0; round < max_rounds; ++round) {
    if (std::all_of(done.begin(), done.end(), [](bool b) { return b; })) break;
    bool progress = false;
    for (int i = 0; i < n; ++i) {
      if (done[i]) continue;
      const CQ& cq = q.disjuncts[i];
      Hypergraph base_h = hypergraph_of(cq);

      std::vector<Candidate> pool;
      auto harvest = [&](int j, const std::vector<Atom>& extra) {
        for (ProvidesWitness& w : provided_sets(q, j, extra, i)) {
          if (popcount(w.v1) < 2) continue;
          bool inside_edge = false;
          for (VarSet e : base_h.edges)
            if ((w.v1 & ~e) == 0) inside_edge = true;
          if (inside_edge) continue;
          bool have = false;
          for (const Candidate& c : pool)
            if (c.v1 == w.v1) have = true;
          if (have) continue;
          pool.push_back(Candidate{w.v1, witness_args(q, w), std::move(w)});
        }
      };
      // base providers first: their witnesses carry no dependencies
      for (int j = 0; j < n; ++j) harvest(j, {});
      for (int j = 0; j < n; ++j)
        if (!chosen[j].empty()) harvest(j, atoms_of(chosen[j]));
      std::sort(pool.begin(), pool.end(), candidate_order);

      // subsets to try, by ascending size then lexicographic candidate index
      std::vector<std::vector<int>> tries;
      const int psz = static_cast<int>(pool.size());
      const int max_size = std::min(psz, 4);
      for (int sz = 1; sz <= max_size; ++sz) {
        std::vector<int> idx(sz);
        for (int k = 0; k < sz; ++k) idx[k] = k;
        while (true) {
          tries.push_back(idx);
          if (tries.size() > 20000) break;
          int k = sz - 1;
          while (k >= 0 && idx[k] == psz - sz + k) --k;
          if (k < 0) break;
          ++idx[k];
          for (int l = k + 1; l < sz; ++l) idx[l] = idx[l - 1] + 1;
        }
        if (tries.size() > 20000) break;
      }
      auto resolve_block = [&](const std::vector<VarSet>& blk,
                               std::vector<int>& out) {
        for (VarSet s : blk) {
          int found = -1;
          for (int k = 0; k < psz; ++k)
            if (pool[k].v1 == s) found = k;
          if (found < 0) return false;
          if (std::find(out.begin(), out.end(), found) == out.end())
            out.push_back(found);
        }
        return true;
      };
      std::vector<int> all_blocks;
      for (const auto& blk : blocks[i]) {
        std::vector<int> idx;
        if (resolve_block(blk, idx) && resolve_block(blk, all_blocks)) {
          std::sort(idx.begin(), idx.end());
          tries.push_back(idx);
        }
      }
      if (!all_blocks.empty()) {
        std::sort(all_blocks.begin(), all_blocks.end());
        tries.push_back(all_blocks);
      }
      if (psz > max_size && psz <= 20) {
        std::vector<int> all(psz);
        for (int k = 0; k < psz; ++k) all[k] = k;
        tries.push_back(all);
      }

      for (const std::vector<int>& t : tries) {
        std::vector<Atom> ext;
        for (int k : t) ext.push_back(Atom{-1, pool[k].args});
        Hypergraph h = hypergraph_of(cq, ext);
        if (!free_connex_tree(h, cq.free_set())) continue;
        for (int k : t) {
          VirtualAtom va;
          va.args = pool[k].args;
          va.witness = pool[k].w;
          int d = 1;
          const auto& pv = chosen[va.witness.provider];
          for (int a = 0; a < va.witness.provider_atom_count; ++a)
            d = std::max(d, pv[a].depth + 1);
          va.depth = d;
          chosen[i].push_back(std::move(va));
        }
        done[i] = true;
        progress = true;
        break;
      }
    }
    if (!progress) break;
  }

  if (!std::all_of(done.begin(), done.end(), [](bool b) { return b; })) {
    if (notes) {
      std::ostringstream os;
      os << "extension search exhausted; unresolved:";
      for (int i = 0; i < n; ++i) {
        if (done[i]) continue;
        const CQ& cq = q.disjuncts[i];
        os << " " << cq.name;
        Hypergraph h = hypergraph_of(cq);
        if (!is_acyclic(h)) {
          os << " (cyclic, no provided set resolves it)";
        } else {
          os << " (free-paths without usable providers:";
          for (const FreePath& p : free_paths_of(h, cq.free_set()))
            os << " " << path_str(cq, p);
          os << ")";
        }
      }
      *notes = os.str();
    }
    return std::nullopt;
  }

  Certificate cert;
  int fresh = 0;
  auto fresh_name = [&]() {
    std::string name;
    do {
      name = "P" + std::to_string(++fresh);
    } while (std::find(q.rel_names.begin(), q.rel_names.end(), name) !=
             q.rel_names.end());
    return name;
  };
  for (int i = 0; i < n; ++i) {
    UnionExtension ext;
    ext.cq = i;
    ext.atoms = chosen[i];
    cert.extensions.push_back(std::move(ext));
  }
  RelId next_rel = static_cast<RelId>(q.rel_names.size());
  for (auto& ext : cert.extensions)
    for (auto& va : ext.atoms) {
      va.rel_name = fresh_name();
      va.rel = next_rel++;
    }
  return cert;
}

namespace {

Verdict tractable_verdict(Certificate cert, std::string notes) {
  Verdict v;
  v.kind = Tractability::Tractable;
  v.certificate = std::move(cert);
  v.theorem = "free-connex-union-extension";
  v.notes = std::move(notes);
  return v;
}

Verdict intractable_verdict(std::string theorem, std::string hypothesis,
                            std::string witness) {
  Verdict v;
  v.kind = Tractability::Intractable;
  v.theorem = std::move(theorem);
  v.hypothesis = std::move(hypothesis);
  v.witness_text = std::move(witness);
  return v;
}

}  // namespace

Verdict classify(const UCQ& q_in) {
  UCQ q = remove_redundant(q_in);
  const int n = static_cast<int>(q.disjuncts.size());
  auto with_query = [&](Verdict v) {
    v.query = q;
    return v;
  };

  std::vector<bool> sjf(n), fc(n), acyc(n);
  for (int i = 0; i < n; ++i) {
    sjf[i] = q.disjuncts[i].self_join_free();
    acyc[i] = is_acyclic(hypergraph_of(q.disjuncts[i]));
    fc[i] = is_free_connex(q, i).has_value();
  }
  std::vector<std::vector<bool>> hom(n, std::vector<bool>(n, false));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) hom[i][j] = !body_homs(q, i, j).empty();

  // 1. free-connex union extensions make the whole union enumerable
  std::string search_notes;
  if (auto cert = union_extension_search(q, &search_notes))
    return with_query(tractable_verdict(std::move(*cert), ""));

  // 2. an unprovided intractable disjunct embeds its own hardness
  for (int i = 0; i < n; ++i) {
    if (!sjf[i] || fc[i]) continue;
    bool incoming = false;
    for (int j = 0; j < n; ++j)
      if (j != i && hom[j][i]) incoming = true;
    if (!incoming)
      return with_query(intractable_verdict(
          "unprovided-hard-disjunct", acyc[i] ? "mat-mul" : "hyperclique",
          q.disjuncts[i].name + " is " +
              (acyc[i] ? "acyclic non-free-connex" : "cyclic") +
              " and no other disjunct has a body-homomorphism into it"));
  }

  // 3. a cyclic disjunct whose incoming maps are all body-isomorphisms keeps
  //    even the decision problem hard
  for (int i = 0; i < n; ++i) {
    if (!sjf[i] || acyc[i]) continue;
    bool ok = true;
    for (int j = 0; j < n && ok; ++j) {
      if (j == i || !hom[j][i]) continue;
      if (!sjf[j] || !is_body_isomorphic(q, i, j)) ok = false;
    }
    if (ok)
      return with_query(intractable_verdict(
          "hard-decision-reduction", "hyperclique",
          q.disjuncts[i].name +
              " is cyclic; every disjunct mapping into it is body-isomorphic"));
  }

  // 4. a union of intractable disjuncts without a body-isomorphic acyclic pair
  {
    bool all_hard = true;
    for (int i = 0; i < n; ++i)
      if (!sjf[i] || fc[i]) all_hard = false;
    if (all_hard) {
      bool iso_acyclic_pair = false;
      for (int i = 0; i < n && !iso_acyclic_pair; ++i)
        for (int j = i + 1; j < n && !iso_acyclic_pair; ++j)
          if (acyc[i] && acyc[j] && is_body_isomorphic(q, i, j))
            iso_acyclic_pair = true;
      if (!iso_acyclic_pair) {
        int pivot = select_pivot(q);
        return with_query(intractable_verdict(
            "union-of-intractable-cqs",
            acyc[pivot] ? "mat-mul" : "hyperclique",
            "all disjuncts are intractable and no two are body-isomorphic "
            "acyclic; pivot " +
                q.disjuncts[pivot].name));
      }
    }
  }

  bool all_sjf = std::all_of(sjf.begin(), sjf.end(), [](bool b) { return b; });
  bool all_acyclic =
      std::all_of(acyc.begin(), acyc.end(), [](bool b) { return b; });

  // 5. exactly two body-isomorphic disjuncts: the guard conditions decide
  if (n == 2 && all_sjf) {
    auto m = normalize_body_isomorphic(q);
    if (m && !all_acyclic)
      return with_query(intractable_verdict(
          "union-of-intractable-cqs", "hyperclique",
          "two body-isomorphic cyclic disjuncts"));
    if (m) {
      for (int owner = 0; owner < 2; ++owner) {
        if (auto viol = free_path_guarded(*m, owner, 1 - owner))
          return with_query(intractable_verdict(
              "body-isomorphic-pair-unguarded-free-path", "mat-mul",
              q.disjuncts[owner].name + " has free-path " +
                  path_str(m->body_owner, viol->path) + " not free in " +
                  q.disjuncts[1 - owner].name));
      }
      for (int owner = 0; owner < 2; ++owner) {
        if (auto viol = bypass_guarded(*m, owner, 1 - owner))
          return with_query(intractable_verdict(
              "body-isomorphic-pair-unguarded-bypass", "4-clique",
              q.disjuncts[owner].name + " has free-path " +
                  path_str(m->body_owner, viol->path) + " with bypass variable " +
                  m->body_owner.var_names[viol->var] + " not free in " +
                  q.disjuncts[1 - owner].name));
      }
      // Guarded both ways is constructively free-connex; the search is seeded
      // with exactly that construction, so missing it is a defect.
      throw std::logic_error(
          "classify: guarded body-isomorphic pair without a free-connex "
          "union extension");
    }
  }

  // 6. several body-isomorphic acyclic disjuncts: union guards decide the
  //    unguarded side; guarded and isolated paths are constructively tractable
  if (n >= 2 && all_sjf && all_acyclic) {
    if (auto m = normalize_body_isomorphic(q)) {
      Hypergraph hb = hypergraph_of(m->body_owner);
      bool all_guarded = true, all_isolated = true;
      for (int i = 0; i < n; ++i) {
        for (const FreePath& p : free_paths_of(hb, m->head_set(i))) {
          if (!union_guard_search(*m, p))
            return with_query(intractable_verdict(
                "free-path-without-union-guard", "mat-mul",
                q.disjuncts[i].name + " has free-path " +
                    path_str(m->body_owner, p) + " with no union guard"));
          if (!is_isolated(*m, i, p)) all_isolated = false;
        }
      }
      if (all_guarded && all_isolated)
        throw std::logic_error(
            "classify: union-guarded isolated free-paths without a "
            "free-connex union extension");
    }
  }

  // 7. outside every theorem we implement
  Verdict v;
  v.kind = Tractability::Unknown;
  v.query = q;
  v.notes = search_notes;
  auto m = normalize_body_isomorphic(q);
  std::ostringstream os;
  for (int i = 0; i < n; ++i) {
    if (fc[i]) continue;
    const CQ& cq = q.disjuncts[i];
    Hypergraph h = hypergraph_of(cq);
    if (!acyc[i]) os << "; " << cq.name << " is cyclic";
    for (const FreePath& p : free_paths_of(h, cq.free_set())) {
      os << "; " << cq.name << " free-path " << path_str(cq, p);
      if (m) {
        // translate into base scope for guard reporting
        FreePath pb;
        for (VarId vv : p.vars) pb.vars.push_back(m->to_base[i][vv]);
        os << (union_guard_search(*m, pb) ? " is union guarded"
                                          : " lacks a union guard");
        if (union_guard_search(*m, pb) && !is_isolated(*m, i, pb))
          os << " but not isolated";
      }
    }
  }
  v.notes += os.str();
  return v;
}

std::string verdict_to_json(const UCQ& q, const Verdict& v) {
  json out;
  switch (v.kind) {
    case Tractability::Tractable: out["kind"] = "Tractable"; break;
    case Tractability::Intractable: out["kind"] = "Intractable"; break;
    case Tractability::Unknown: out["kind"] = "Unknown"; break;
  }
  if (!v.theorem.empty()) out["theorem"] = v.theorem;
  if (!v.hypothesis.empty()) out["hypothesis"] = v.hypothesis;
  if (!v.witness_text.empty()) out["witness"] = v.witness_text;
  if (!v.notes.empty()) out["notes"] = v.notes;
  if (v.certificate) {
    json exts = json::array();
    for (const UnionExtension& e : v.certificate->extensions) {
      const CQ& cq = q.disjuncts[e.cq];
      json je;
      je["cq"] = cq.name;
      json atoms = json::array();
      for (const VirtualAtom& a : e.atoms) {
        json ja;
        ja["relation"] = a.rel_name;
        json vars = json::array();
        for (VarId vv : a.args) vars.push_back(cq.var_names[vv]);
        ja["vars"] = vars;
        ja["provider"] = q.disjuncts[a.witness.provider].name;
        ja["provider_virtual_atoms"] = a.witness.provider_atom_count;
        json v2 = json::array(), s = json::array();
        for (VarId vv : set_to_vars(a.witness.v2))
          v2.push_back(q.disjuncts[a.witness.provider].var_names[vv]);
        for (VarId vv : set_to_vars(a.witness.s))
          s.push_back(q.disjuncts[a.witness.provider].var_names[vv]);
        ja["v2"] = v2;
        ja["s"] = s;
        ja["depth"] = a.depth;
        atoms.push_back(ja);
      }
      je["virtual_atoms"] = atoms;
      exts.push_back(je);
    }
    out["extensions"] = exts;
  }
  return out.dump(2);
}

}  // namespace ucq
