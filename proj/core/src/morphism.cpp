#include "ucq/morphism.hpp"

#include <algorithm>
#include <stdexcept>

namespace ucq {

bool check_body_hom(const std::vector<Atom>& src_atoms,
                    const std::vector<Atom>& dst_atoms,
                    const std::vector<VarId>& map) {
  for (const Atom& a : src_atoms) {
    Atom img;
    img.rel = a.rel;
    for (VarId v : a.args) img.args.push_back(map[v]);
    if (std::find(dst_atoms.begin(), dst_atoms.end(), img) == dst_atoms.end())
      return false;
  }
  return true;
}

namespace {

void hom_backtrack(const std::vector<Atom>& src, const std::vector<Atom>& dst,
                   size_t next, std::vector<VarId>& map,
                   const std::vector<VarId>* fixed,
                   std::vector<std::vector<VarId>>& out) {
  if (next == src.size()) {
    out.push_back(map);
    return;
  }
  const Atom& a = src[next];
  for (const Atom& b : dst) {
    if (b.rel != a.rel) continue;
    std::vector<std::pair<VarId, VarId>> bound;
    bool ok = true;
    for (size_t i = 0; i < a.args.size() && ok; ++i) {
      VarId s = a.args[i], d = b.args[i];
      if (map[s] == -1) {
        map[s] = d;
        bound.emplace_back(s, d);
      } else if (map[s] != d) {
        ok = false;
      }
    }
    if (ok) hom_backtrack(src, dst, next + 1, map, fixed, out);
    for (auto [s, d] : bound) map[s] = -1;
  }
}

std::vector<std::vector<VarId>> homs_with_seed(const std::vector<Atom>& src,
                                               int src_nvars,
                                               const std::vector<Atom>& dst,
                                               const std::vector<VarId>& seed) {
  std::vector<std::vector<VarId>> out;
  std::vector<VarId> map = seed;
  map.resize(src_nvars, -1);
  hom_backtrack(src, dst, 0, map, nullptr, out);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

std::vector<std::vector<VarId>> body_homs_atoms(
    const std::vector<Atom>& src_atoms, int src_nvars,
    const std::vector<Atom>& dst_atoms) {
  return homs_with_seed(src_atoms, src_nvars, dst_atoms, {});
}

std::vector<BodyHom> body_homs(const UCQ& q, int src, int dst) {
  auto maps = body_homs_atoms(q.disjuncts[src].body,
                              q.disjuncts[src].var_count(),
                              q.disjuncts[dst].body);
  std::vector<BodyHom> out;
  for (auto& m : maps) out.push_back(BodyHom{src, dst, std::move(m)});
  return out;
}

std::optional<BodyHom> is_body_isomorphic(const UCQ& q, int q1, int q2) {
  if (!q.disjuncts[q1].self_join_free() || !q.disjuncts[q2].self_join_free())
    throw std::invalid_argument(
        "body-isomorphism is only defined for self-join free CQs");
  auto fwd = body_homs(q, q2, q1);
  if (fwd.empty()) return std::nullopt;
  if (body_homs(q, q1, q2).empty()) return std::nullopt;
  return fwd.front();
}

bool cq_contains(const UCQ& q, int q1, int q2) {
  const CQ& a = q.disjuncts[q1];
  const CQ& b = q.disjuncts[q2];
  std::vector<VarId> seed(b.var_count(), -1);
  for (size_t i = 0; i < b.head.size(); ++i) {
    VarId from = b.head[i], to = a.head[i];
    if (seed[from] != -1 && seed[from] != to) return false;
    seed[from] = to;
  }
  std::vector<std::vector<VarId>> out;
  std::vector<VarId> map = seed;
  hom_backtrack(b.body, a.body, 0, map, nullptr, out);
  return !out.empty();
}

bool check_provides_witness(const UCQ& q, const ProvidesWitness& w,
                            const std::vector<Atom>& provider_extra,
                            int consumer) {
  const CQ& p = q.disjuncts[w.provider];
  if (!check_body_hom(p.body, q.disjuncts[consumer].body, w.hom.map))
    return false;
  VarSet img = 0;
  for (VarId v : set_to_vars(w.v2)) img |= var_bit(w.hom.map[v]);
  if (img != w.v1) return false;
  VarSet fr = p.free_set();
  if ((w.v2 & ~w.s) != 0 || (w.s & ~fr) != 0) return false;
  Hypergraph h = hypergraph_of(p, provider_extra);
  if (w.tree.s != w.s) return false;
  return check_ext_connex_tree(w.tree, h);
}

namespace {

// Enumerates witnesses in (hom index, v2, s) order; the callback returns true
// to stop. Trees are built lazily once a (v2, s) pair passes the cheap tests.
template <typename F>
void for_each_witness(const UCQ& q, int provider,
                      const std::vector<Atom>& provider_extra, int consumer,
                      F&& cb) {
  const CQ& p = q.disjuncts[provider];
  VarSet fr = p.free_set();
  Hypergraph h = hypergraph_of(p, provider_extra);
  if (!is_acyclic(h)) return;

  auto homs = body_homs(q, provider, consumer);
  std::vector<VarId> fr_vars = set_to_vars(fr);
  const int fn = static_cast<int>(fr_vars.size());

  // s-connex results are shared across homs
  std::vector<std::optional<ExtConnexTree>> s_cache(size_t{1} << fn);
  std::vector<char> s_known(size_t{1} << fn, 0);
  auto s_tree = [&](int smask_local) -> const std::optional<ExtConnexTree>& {
    if (!s_known[smask_local]) {
      VarSet s = 0;
      for (int k = 0; k < fn; ++k)
        if ((smask_local >> k) & 1) s |= var_bit(fr_vars[k]);
      s_cache[smask_local] =
          acyclic_with(h, s) ? ext_connex_tree(h, s) : std::nullopt;
      s_known[smask_local] = 1;
    }
    return s_cache[smask_local];
  };

  for (size_t hi = 0; hi < homs.size(); ++hi) {
    for (int v2m = 0; v2m < (1 << fn); ++v2m) {
      VarSet v2 = 0, v1 = 0;
      for (int k = 0; k < fn; ++k)
        if ((v2m >> k) & 1) {
          v2 |= var_bit(fr_vars[k]);
          v1 |= var_bit(homs[hi].map[fr_vars[k]]);
        }
      for (int sm = v2m; sm < (1 << fn); ++sm) {
        if ((sm & v2m) != v2m) continue;  // need v2 ⊆ s
        const auto& tree = s_tree(sm);
        if (!tree) continue;
        ProvidesWitness w;
        w.provider = provider;
        w.provider_atom_count = static_cast<int>(provider_extra.size());
        w.hom = homs[hi];
        w.v2 = v2;
        w.v1 = v1;
        VarSet s = 0;
        for (int k = 0; k < fn; ++k)
          if ((sm >> k) & 1) s |= var_bit(fr_vars[k]);
        w.s = s;
        w.tree = *tree;
        if (cb(w)) return;
        break;  // first (smallest) s suffices per v2
      }
    }
  }
}

}  // namespace

std::optional<ProvidesWitness> provides(const UCQ& q, int provider,
                                        const std::vector<Atom>& provider_extra,
                                        int consumer, VarSet v1) {
  if ((v1 & ~q.disjuncts[consumer].all_vars()) != 0)
    throw std::invalid_argument("provides: v1 is not a consumer variable set");
  std::optional<ProvidesWitness> out;
  for_each_witness(q, provider, provider_extra, consumer,
                   [&](const ProvidesWitness& w) {
                     if (w.v1 != v1) return false;
                     out = w;
                     return true;
                   });
  return out;
}

std::vector<ProvidesWitness> provided_sets(const UCQ& q, int provider,
                                           const std::vector<Atom>& provider_extra,
                                           int consumer) {
  std::vector<ProvidesWitness> out;
  for_each_witness(q, provider, provider_extra, consumer,
                   [&](const ProvidesWitness& w) {
                     for (const auto& have : out)
                       if (have.v1 == w.v1) return false;
                     out.push_back(w);
                     return false;
                   });
  return out;
}

std::vector<VarId> witness_args(const UCQ& q, const ProvidesWitness& w) {
  std::vector<VarId> args;
  for (VarId hv : q.disjuncts[w.provider].head) {
    if (!contains(w.v2, hv)) continue;
    VarId img = w.hom.map[hv];
    if (std::find(args.begin(), args.end(), img) == args.end())
      args.push_back(img);
  }
  return args;
}

}  // namespace ucq
