#include "ucq/testkit.hpp"
#include <set>
#include <functional>
#include <array>

#include <algorithm>
#include <random>
#include <stdexcept>

namespace ucq {

namespace {

void eval_backtrack(const UCQ& q, const CQ& cq, const Database& db, size_t next,
                    std::vector<ValId>& assign,
                    const std::function<void(const std::vector<ValId>&)>& sink) {
  if (next == cq.body.size()) {
    sink(assign);
    return;
  }
  const Atom& a = cq.body[next];
  int rid = db.find_relation(q.rel_names[a.rel]);
  if (rid < 0) return;  // missing relation evaluates as empty
  for (const auto& t : db.relations[rid].tuples) {
    std::vector<std::pair<VarId, ValId>> bound;
    bool ok = true;
    for (size_t i = 0; i < a.args.size() && ok; ++i) {
      VarId v = a.args[i];
      if (assign[v] == -1) {
        assign[v] = t[i];
        bound.emplace_back(v, t[i]);
      } else if (assign[v] != t[i]) {
        ok = false;
      }
    }
    if (ok) eval_backtrack(q, cq, db, next + 1, assign, sink);
    for (auto [v, val] : bound) assign[v] = -1;
  }
}

}  // namespace

std::set<std::vector<ValId>> brute_force_project(const UCQ& q, int disjunct,
                                                 const Database& db,
                                                 const std::vector<VarId>& proj) {
  const CQ& cq = q.disjuncts[disjunct];
  std::set<std::vector<ValId>> out;
  std::vector<ValId> assign(cq.var_count(), -1);
  eval_backtrack(q, cq, db, 0, assign, [&](const std::vector<ValId>& full) {
    std::vector<ValId> row;
    row.reserve(proj.size());
    for (VarId v : proj) row.push_back(full[v]);
    out.insert(std::move(row));
  });
  return out;
}

std::set<std::vector<ValId>> brute_force_eval_cq(const UCQ& q, int disjunct,
                                                 const Database& db) {
  return brute_force_project(q, disjunct, db, q.disjuncts[disjunct].head);
}

std::set<std::vector<ValId>> brute_force_eval(const UCQ& q, const Database& db) {
  std::set<std::vector<ValId>> out;
  for (size_t i = 0; i < q.disjuncts.size(); ++i) {
    auto part = brute_force_eval_cq(q, static_cast<int>(i), db);
    out.insert(part.begin(), part.end());
  }
  return out;
}

std::string tag_value(const std::string& value, const std::string& var) {
  return value + "@" + var;
}

std::string untag_value(const std::string& value) {
  size_t at = value.rfind('@');
  return at == std::string::npos ? value : value.substr(0, at);
}

Database gen_var_tagged(const UCQ& q, int pivot, const Database& db) {
  const CQ& cq = q.disjuncts[pivot];
  if (!cq.self_join_free())
    throw std::invalid_argument("gen_var_tagged: pivot must be self-join free");
  Database out;
  for (size_t r = 0; r < q.rel_names.size(); ++r)
    out.add_relation(q.rel_names[r], q.rel_arity[r]);
  for (const Atom& a : cq.body) {
    int src = db.find_relation(q.rel_names[a.rel]);
    int dst = out.find_relation(q.rel_names[a.rel]);
    if (src < 0) continue;
    for (const auto& t : db.relations[src].tuples) {
      std::vector<ValId> tagged;
      tagged.reserve(t.size());
      for (size_t i = 0; i < t.size(); ++i)
        tagged.push_back(out.dict.intern(
            tag_value(db.dict.str(t[i]), cq.var_names[a.args[i]])));
      out.relations[dst].insert(std::move(tagged));
    }
  }
  return out;
}

Database gen_matmul(const BoolMatrix& a, const BoolMatrix& b, const UCQ& q,
                    int disjunct, const std::vector<VarId>& path, int split) {
  const CQ& cq = q.disjuncts[disjunct];
  if (split <= 0 || split + 1 >= static_cast<int>(path.size())) {
    // endpoint split: V_x = {z0}, V_z = interior, V_y = {z_k+1}
    if (split != 0 && split != static_cast<int>(path.size()) - 1)
      throw std::invalid_argument("gen_matmul: split not on the path");
  }
  VarSet vx = 0, vz = 0, vy = 0;
  if (split == 0 || split == static_cast<int>(path.size()) - 1) {
    vx = var_bit(path.front());
    vy = var_bit(path.back());
    for (size_t i = 1; i + 1 < path.size(); ++i) vz |= var_bit(path[i]);
  } else {
    for (int i = 0; i < split; ++i) vx |= var_bit(path[i]);
    vz = var_bit(path[split]);
    for (size_t i = split + 1; i < path.size(); ++i) vy |= var_bit(path[i]);
  }

  Database out;
  for (size_t r = 0; r < q.rel_names.size(); ++r)
    out.add_relation(q.rel_names[r], q.rel_arity[r]);
  ValId bot = out.dict.intern("⊥");
  auto num = [&](int v) { return out.dict.intern(std::to_string(v)); };

  for (const Atom& atom : cq.body) {
    int rid = out.find_relation(q.rel_names[atom.rel]);
    bool a_side = (atom.var_set() & vy) == 0;
    const BoolMatrix& mat = a_side ? a : b;
    for (auto [r, c] : mat) {
      std::vector<ValId> t;
      t.reserve(atom.args.size());
      for (VarId v : atom.args) {
        if (a_side) {
          if (contains(vx, v))
            t.push_back(num(r));
          else if (contains(vz, v))
            t.push_back(num(c));
          else
            t.push_back(bot);
        } else {
          if (contains(vz, v))
            t.push_back(num(r));
          else if (contains(vy, v))
            t.push_back(num(c));
          else
            t.push_back(bot);
        }
      }
      out.relations[rid].insert(std::move(t));
    }
  }
  return out;
}

namespace {

std::vector<std::array<int, 3>> triangle_list(
    const std::vector<std::pair<int, int>>& edges) {
  std::set<std::pair<int, int>> es;
  int n = 0;
  for (auto [u, v] : edges) {
    if (u == v) continue;
    es.emplace(std::min(u, v), std::max(u, v));
    n = std::max(n, std::max(u, v));
  }
  std::vector<std::array<int, 3>> tris;
  for (auto [u, v] : es)
    for (int w = v + 1; w <= n; ++w)
      if (es.count({u, w}) && es.count({v, w})) tris.push_back({u, v, w});
  return tris;
}

}  // namespace

Database gen_triangle_list(const std::vector<std::pair<int, int>>& edges,
                           const UCQ& q) {
  Database out;
  for (size_t r = 0; r < q.rel_names.size(); ++r) {
    if (q.rel_arity[r] != 3)
      throw std::invalid_argument(
          "gen_triangle_list: every relation must be ternary");
    out.add_relation(q.rel_names[r], 3);
  }
  auto tris = triangle_list(edges);
  for (size_t r = 0; r < out.relations.size(); ++r)
    for (auto [u, v, w] : tris)
      out.relations[r].insert({out.dict.intern(std::to_string(u)),
                               out.dict.intern(std::to_string(v)),
                               out.dict.intern(std::to_string(w))});
  return out;
}

Database gen_triangle_encode(const std::vector<std::pair<int, int>>& edges,
                             const UCQ& q, int pivot) {
  const CQ& cq = q.disjuncts[pivot];
  // a 3-cycle of binary atoms: R(a,b), S(b,c), T(a,c) up to argument order
  int ra = -1, rb = -1, rc = -1;
  VarId va = -1, vb = -1, vc = -1;
  const int m = static_cast<int>(cq.body.size());
  for (int i = 0; i < m && ra < 0; ++i) {
    if (cq.body[i].args.size() != 2) continue;
    for (int j = 0; j < m && ra < 0; ++j) {
      if (j == i || cq.body[j].args.size() != 2) continue;
      VarSet si = cq.body[i].var_set(), sj = cq.body[j].var_set();
      VarSet mid = si & sj;
      if (popcount(mid) != 1) continue;
      for (int k = 0; k < m && ra < 0; ++k) {
        if (k == i || k == j || cq.body[k].args.size() != 2) continue;
        VarSet sk = cq.body[k].var_set();
        if (sk == ((si | sj) & ~mid)) {
          ra = i, rb = j, rc = k;
          vb = set_to_vars(mid)[0];
          va = set_to_vars(si & ~mid)[0];
          vc = set_to_vars(sj & ~mid)[0];
        }
      }
    }
  }
  if (ra < 0)
    throw std::invalid_argument(
        "gen_triangle_encode: pivot has no 3-cycle of binary atoms");

  Database out;
  for (size_t r = 0; r < q.rel_names.size(); ++r)
    out.add_relation(q.rel_names[r], q.rel_arity[r]);
  auto tagged = [&](int node, VarId v) {
    return out.dict.intern(
        tag_value(std::to_string(node), cq.var_names[v]));
  };
  auto put = [&](int atom_idx, VarId x, int u, VarId y, int v) {
    const Atom& atom = cq.body[atom_idx];
    std::vector<ValId> t(2);
    t[atom.args[0] == x ? 0 : 1] = tagged(u, x);
    t[atom.args[0] == x ? 1 : 0] = tagged(v, y);
    out.relations[out.find_relation(q.rel_names[atom.rel])].insert(std::move(t));
  };
  for (auto [u, v] : edges) {
    if (u == v) continue;
    int lo = std::min(u, v), hi = std::max(u, v);
    put(ra, va, lo, vb, hi);
    put(rb, vb, lo, vc, hi);
    put(rc, va, lo, vc, hi);
  }
  return out;
}

Database gen_random(std::uint64_t seed, const UCQ& q, int tuples_per_relation,
                    int domain) {
  std::mt19937_64 rng(seed);
  Database out;
  for (size_t r = 0; r < q.rel_names.size(); ++r) {
    int rid = out.add_relation(q.rel_names[r], q.rel_arity[r]);
    for (int t = 0; t < tuples_per_relation; ++t) {
      std::vector<ValId> tuple;
      for (int i = 0; i < q.rel_arity[r]; ++i)
        tuple.push_back(out.dict.intern(
            "c" + std::to_string(rng() % std::max(1, domain))));
      out.relations[rid].insert(std::move(tuple));
    }
  }
  return out;
}

UCQ gen_random_query(std::uint64_t seed, const QueryShape& shape) {
  std::mt19937_64 rng(seed);
  auto pick = [&](int lo, int hi) {  // inclusive
    return lo + static_cast<int>(rng() % (hi - lo + 1));
  };
  const int disjuncts = pick(1, shape.max_disjuncts);
  const int nvars = pick(2, shape.max_vars);

  // shared schema: relation arities fixed across disjuncts
  std::vector<int> arity;
  const int nrel = pick(1, shape.max_atoms);
  for (int r = 0; r < nrel; ++r) arity.push_back(pick(1, shape.max_arity));

  UCQ q;
  for (int r = 0; r < nrel; ++r) {
    q.rel_names.push_back("R" + std::to_string(r + 1));
    q.rel_arity.push_back(arity[r]);
  }
  int head_arity = -1;
  for (int d = 0; d < disjuncts; ++d) {
    CQ cq;
    cq.name = "Q" + std::to_string(d + 1);
    for (int v = 0; v < nvars; ++v)
      cq.var_names.push_back("v" + std::to_string(v + 1));
    const int natoms = pick(1, shape.max_atoms);
    for (int a = 0; a < natoms; ++a) {
      Atom atom;
      atom.rel = pick(0, nrel - 1);
      for (int i = 0; i < arity[atom.rel]; ++i)
        atom.args.push_back(pick(0, nvars - 1));
      cq.body.push_back(std::move(atom));
    }
    // compact away unused variable ids
    std::vector<VarId> remap(nvars, -1);
    std::vector<std::string> used_names;
    for (Atom& atom : cq.body)
      for (VarId& v : atom.args) {
        if (remap[v] < 0) {
          remap[v] = static_cast<VarId>(used_names.size());
          used_names.push_back(cq.var_names[v]);
        }
        v = remap[v];
      }
    cq.var_names = std::move(used_names);

    std::vector<VarId> candidates = set_to_vars(cq.all_vars());
    if (head_arity < 0) head_arity = pick(0, static_cast<int>(candidates.size()));
    for (int h = 0; h < head_arity; ++h)
      cq.head.push_back(candidates[rng() % candidates.size()]);
    q.disjuncts.push_back(std::move(cq));
  }
  q.head_arity = head_arity;
  return q;
}

bool has_four_clique(int n, const std::vector<std::pair<int, int>>& edges) {
  std::set<std::pair<int, int>> es;
  for (auto [u, v] : edges)
    if (u != v) es.emplace(std::min(u, v), std::max(u, v));
  auto adj = [&](int a, int b) {
    return es.count({std::min(a, b), std::max(a, b)}) > 0;
  };
  for (int a = 1; a <= n; ++a)
    for (int b = a + 1; b <= n; ++b)
      for (int c = b + 1; c <= n; ++c)
        for (int d = c + 1; d <= n; ++d)
          if (adj(a, b) && adj(a, c) && adj(a, d) && adj(b, c) && adj(b, d) &&
              adj(c, d))
            return true;
  return false;
}

std::vector<std::pair<int, int>> complete_graph(int n) {
  std::vector<std::pair<int, int>> out;
  for (int u = 1; u <= n; ++u)
    for (int v = u + 1; v <= n; ++v) out.emplace_back(u, v);
  return out;
}

std::vector<std::pair<int, int>> random_graph(std::uint64_t seed, int n,
                                              double density) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::vector<std::pair<int, int>> out;
  for (int u = 1; u <= n; ++u)
    for (int v = u + 1; v <= n; ++v)
      if (coin(rng) < density) out.emplace_back(u, v);
  return out;
}

}  // namespace ucq
