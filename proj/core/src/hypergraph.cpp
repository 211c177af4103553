#include "ucq/hypergraph.hpp"
#include <functional>

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace ucq {

VarSet Hypergraph::vertices() const {
  VarSet s = 0;
  for (VarSet e : edges) s |= e;
  return s;
}

VarSet Hypergraph::neighbors(VarId v) const {
  VarSet s = 0;
  for (VarSet e : edges)
    if (contains(e, v)) s |= e;
  return s & ~var_bit(v);
}

static Hypergraph build_hypergraph(const CQ& q, const std::vector<Atom>* extra) {
  Hypergraph h;
  h.nvars = q.var_count();
  auto add = [&](const Atom& a, int idx) {
    VarSet s = a.var_set();
    for (size_t i = 0; i < h.edges.size(); ++i) {
      if (h.edges[i] == s) {
        h.edge_atoms[i].push_back(idx);
        return;
      }
    }
    h.edges.push_back(s);
    h.edge_atoms.push_back({idx});
  };
  for (size_t i = 0; i < q.body.size(); ++i) add(q.body[i], static_cast<int>(i));
  if (extra)
    for (size_t i = 0; i < extra->size(); ++i)
      add((*extra)[i], static_cast<int>(q.body.size() + i));
  return h;
}

Hypergraph hypergraph_of(const CQ& q) { return build_hypergraph(q, nullptr); }
Hypergraph hypergraph_of(const CQ& q, const std::vector<Atom>& extra) {
  return build_hypergraph(q, &extra);
}

bool check_join_tree(const JoinTree& t) {
  const int n = static_cast<int>(t.nodes.size());
  if (n == 0) return false;
  if (static_cast<int>(t.edges.size()) != n - 1) return false;
  std::vector<std::vector<int>> adj(n);
  for (auto [a, b] : t.edges) {
    if (a < 0 || a >= n || b < 0 || b >= n || a == b) return false;
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  // connectivity (with n-1 edges this also rules out cycles)
  std::vector<char> seen(n, 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  while (!stack.empty()) {
    int u = stack.back();
    stack.pop_back();
    for (int w : adj[u])
      if (!seen[w]) {
        seen[w] = 1;
        stack.push_back(w);
      }
  }
  if (std::find(seen.begin(), seen.end(), 0) != seen.end()) return false;
  // running intersection: nodes holding each variable form a subtree
  VarSet all = 0;
  for (VarSet s : t.nodes) all |= s;
  for (VarId v : set_to_vars(all)) {
    int start = -1, count = 0;
    for (int i = 0; i < n; ++i)
      if (contains(t.nodes[i], v)) {
        start = i;
        ++count;
      }
    std::vector<char> vis(n, 0);
    std::vector<int> st{start};
    vis[start] = 1;
    int reached = 1;
    while (!st.empty()) {
      int u = st.back();
      st.pop_back();
      for (int w : adj[u])
        if (!vis[w] && contains(t.nodes[w], v)) {
          vis[w] = 1;
          ++reached;
          st.push_back(w);
        }
    }
    if (reached != count) return false;
  }
  return true;
}

namespace {

// GYO over an explicit node list (sets may repeat). Fills parent[i] for every
// removed ear; the last remaining node gets parent -1. Returns false if stuck.
bool gyo_parents(const std::vector<VarSet>& nodes, std::vector<int>& parent) {
  const int n = static_cast<int>(nodes.size());
  parent.assign(n, -2);
  std::vector<char> alive(n, 1);
  int remaining = n;
  while (remaining > 1) {
    int ear = -1, witness = -1;
    for (int i = 0; i < n && ear < 0; ++i) {
      if (!alive[i]) continue;
      VarSet others = 0;
      for (int j = 0; j < n; ++j)
        if (alive[j] && j != i) others |= nodes[j];
      VarSet shared = nodes[i] & others;
      if (shared == 0) {
        // isolated component: attach anywhere
        for (int j = 0; j < n; ++j)
          if (alive[j] && j != i) {
            ear = i;
            witness = j;
            break;
          }
        break;
      }
      for (int j = 0; j < n; ++j) {
        if (!alive[j] || j == i) continue;
        if ((shared & ~nodes[j]) == 0) {
          ear = i;
          witness = j;
          break;
        }
      }
    }
    if (ear < 0) return false;
    parent[ear] = witness;
    alive[ear] = 0;
    --remaining;
  }
  for (int i = 0; i < n; ++i)
    if (alive[i]) parent[i] = -1;
  return true;
}

}  // namespace

std::optional<JoinTree> gyo_join_tree(const Hypergraph& h) {
  std::vector<int> parent;
  if (!gyo_parents(h.edges, parent)) return std::nullopt;
  JoinTree t;
  t.nodes = h.edges;
  for (size_t i = 0; i < parent.size(); ++i)
    if (parent[i] >= 0) t.edges.emplace_back(static_cast<int>(i), parent[i]);
  return t;
}

bool is_acyclic(const Hypergraph& h) {
  std::vector<int> parent;
  return gyo_parents(h.edges, parent);
}

bool acyclic_with(const Hypergraph& h, VarSet s) {
  std::vector<VarSet> nodes = h.edges;
  if (s != 0) nodes.push_back(s);
  std::vector<int> parent;
  return gyo_parents(nodes, parent);
}

std::vector<int> ExtConnexTree::connex_nodes() const {
  std::vector<int> out;
  for (size_t i = 0; i < nodes.size(); ++i)
    if (connex[i]) out.push_back(static_cast<int>(i));
  return out;
}

bool check_ext_connex_tree(const ExtConnexTree& t, const Hypergraph& h) {
  JoinTree jt{t.nodes, t.edges};
  if (!check_join_tree(jt)) return false;
  // inclusive extension: every node inside an original edge, every edge present
  for (size_t i = 0; i < t.nodes.size(); ++i) {
    bool covered = false;
    for (VarSet e : h.edges)
      if ((t.nodes[i] & ~e) == 0) covered = true;
    if (!covered || t.nodes[i] == 0) return false;
  }
  for (VarSet e : h.edges)
    if (std::find(t.nodes.begin(), t.nodes.end(), e) == t.nodes.end())
      return false;
  // connex part: connected, variables exactly s
  std::vector<int> cn = t.connex_nodes();
  VarSet got = 0;
  for (int i : cn) got |= t.nodes[i];
  if (got != t.s) return false;
  if (!cn.empty()) {
    std::vector<std::vector<int>> adj(t.nodes.size());
    for (auto [a, b] : t.edges) {
      adj[a].push_back(b);
      adj[b].push_back(a);
    }
    std::vector<char> vis(t.nodes.size(), 0);
    std::vector<int> st{cn[0]};
    vis[cn[0]] = 1;
    int reached = 1;
    while (!st.empty()) {
      int u = st.back();
      st.pop_back();
      for (int w : adj[u])
        if (!vis[w] && t.connex[w]) {
          vis[w] = 1;
          ++reached;
          st.push_back(w);
        }
    }
    if (reached != static_cast<int>(cn.size())) return false;
  }
  return true;
}

std::optional<ExtConnexTree> ext_connex_tree(const Hypergraph& h, VarSet s) {
  if (!is_acyclic(h)) return std::nullopt;

  ExtConnexTree out;
  out.s = s;
  if (s == 0) {
    auto jt = gyo_join_tree(h);
    out.nodes = jt->nodes;
    out.edges = jt->edges;
    out.connex.assign(out.nodes.size(), 0);
    for (size_t i = 0; i < h.edges.size(); ++i)
      out.cover_atom.push_back(h.edge_atoms[i][0]);
    return out;
  }
  if ((s & ~h.vertices()) != 0)
    throw std::invalid_argument("connex set contains unknown vertices");

  // Join tree of E plus an s-node, rooted at the s-node.
  const int m = static_cast<int>(h.edges.size());
  std::vector<VarSet> nodes2 = h.edges;
  nodes2.push_back(s);
  const int snode = m;
  std::vector<int> parent;
  if (!gyo_parents(nodes2, parent)) return std::nullopt;

  std::vector<std::vector<int>> adj(m + 1);
  for (int i = 0; i <= m; ++i)
    if (parent[i] >= 0) {
      adj[i].push_back(parent[i]);
      adj[parent[i]].push_back(i);
    }
  std::vector<int> par(m + 1, -1), order;
  std::vector<char> vis(m + 1, 0);
  std::vector<int> st{snode};
  vis[snode] = 1;
  while (!st.empty()) {
    int u = st.back();
    st.pop_back();
    order.push_back(u);
    for (int w : adj[u])
      if (!vis[w]) {
        vis[w] = 1;
        par[w] = u;
        st.push_back(w);
      }
  }

  // Each child branch of the s-node meets s in exactly the branch top's
  // intersection with s; those companions carry the connex subtree.
  std::vector<int> tops;
  for (int i = 0; i < m; ++i)
    if (par[i] == snode) tops.push_back(i);
  std::sort(tops.begin(), tops.end());

  out.nodes = h.edges;
  for (int i = 0; i < m; ++i) out.cover_atom.push_back(h.edge_atoms[i][0]);
  out.connex.assign(m, 0);

  // companion node per distinct nonempty top intersection
  std::vector<VarSet> comp_sets;
  std::vector<int> comp_node;
  auto companion = [&](VarSet c, int top) -> int {
    for (size_t k = 0; k < comp_sets.size(); ++k)
      if (comp_sets[k] == c) return comp_node[k];
    int node;
    if (out.nodes[top] == c) {
      node = top;  // the branch top lies inside s and is its own companion
    } else {
      node = static_cast<int>(out.nodes.size());
      out.nodes.push_back(c);
      out.cover_atom.push_back(h.edge_atoms[top][0]);
      out.connex.push_back(0);
    }
    out.connex[node] = 1;
    comp_sets.push_back(c);
    comp_node.push_back(node);
    return node;
  };

  std::vector<int> orphan_tops;
  for (int top : tops) {
    VarSet c = out.nodes[top] & s;
    if (c == 0) {
      orphan_tops.push_back(top);
      continue;
    }
    int cn = companion(c, top);
    if (cn != top) out.edges.emplace_back(top, cn);
  }
  // keep all branch-internal edges
  for (int i = 0; i < m; ++i)
    if (par[i] >= 0 && par[i] != snode) out.edges.emplace_back(i, par[i]);

  if (comp_sets.empty()) return std::nullopt;  // s nonempty but untouched

  // The companions form an acyclic hypergraph over s; its join tree links them.
  Hypergraph ch;
  ch.nvars = h.nvars;
  for (VarSet c : comp_sets) {
    if (std::find(ch.edges.begin(), ch.edges.end(), c) == ch.edges.end()) {
      ch.edges.push_back(c);
      ch.edge_atoms.push_back({0});
    }
  }
  std::vector<int> cparent;
  if (!gyo_parents(ch.edges, cparent)) return std::nullopt;
  auto node_of_set = [&](VarSet c) {
    for (size_t k = 0; k < comp_sets.size(); ++k)
      if (comp_sets[k] == c) return comp_node[k];
    return -1;
  };
  for (size_t i = 0; i < ch.edges.size(); ++i)
    if (cparent[i] >= 0)
      out.edges.emplace_back(node_of_set(ch.edges[i]),
                             node_of_set(ch.edges[cparent[i]]));
  for (int top : orphan_tops) out.edges.emplace_back(top, comp_node[0]);

  if (!check_ext_connex_tree(out, h))
    throw std::logic_error("ext_connex_tree: constructed tree failed validation");
  return out;
}

VarSet FreePath::var_set() const {
  VarSet s = 0;
  for (VarId v : vars) s |= var_bit(v);
  return s;
}

std::vector<FreePath> free_paths_of(const Hypergraph& h, VarSet free) {
  std::vector<FreePath> out;
  std::vector<VarSet> nbr(h.nvars, 0);
  for (VarId v : set_to_vars(h.vertices())) nbr[v] = h.neighbors(v);

  std::vector<VarId> path;
  auto emit = [&](VarId last) {
    if (path.front() > last) return;  // canonical orientation
    FreePath p;
    p.vars = path;
    p.vars.push_back(last);
    out.push_back(std::move(p));
  };
  // extend with w: w must neighbor only the last path vertex (chordless)
  auto chordless_ok = [&](VarId w) {
    for (size_t i = 0; i + 1 < path.size(); ++i)
      if (contains(nbr[path[i]], w)) return false;
    return true;
  };
  std::function<void()> dfs = [&]() {
    VarId last = path.back();
    for (VarId w : set_to_vars(nbr[last])) {
      if (std::find(path.begin(), path.end(), w) != path.end()) continue;
      if (!chordless_ok(w)) continue;
      if (contains(free, w)) {
        if (path.size() >= 2) emit(w);
      } else {
        path.push_back(w);
        dfs();
        path.pop_back();
      }
    }
  };
  for (VarId x : set_to_vars(free & h.vertices())) {
    path.assign(1, x);
    dfs();
  }
  std::sort(out.begin(), out.end(),
            [](const FreePath& a, const FreePath& b) { return a.vars < b.vars; });
  return out;
}

std::vector<FreePath> free_paths(const UCQ& q, int disjunct) {
  const CQ& cq = q.disjuncts[disjunct];
  auto out = free_paths_of(hypergraph_of(cq), cq.free_set());
  for (auto& p : out) p.owner = disjunct;
  return out;
}

std::optional<ExtConnexTree> free_connex_tree(const Hypergraph& h, VarSet free) {
  return ext_connex_tree(h, free);
}

std::optional<ExtConnexTree> is_free_connex(const UCQ& q, int disjunct) {
  const CQ& cq = q.disjuncts[disjunct];
  return free_connex_tree(hypergraph_of(cq), cq.free_set());
}

namespace {

std::vector<int> tree_path(const JoinTree& t, int from, int to) {
  const int n = static_cast<int>(t.nodes.size());
  std::vector<std::vector<int>> adj(n);
  for (auto [a, b] : t.edges) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  std::vector<int> par(n, -2);
  std::vector<int> queue{from};
  par[from] = -1;
  for (size_t qi = 0; qi < queue.size(); ++qi) {
    int u = queue[qi];
    for (int w : adj[u])
      if (par[w] == -2) {
        par[w] = u;
        queue.push_back(w);
      }
  }
  std::vector<int> path;
  for (int u = to; u != -1; u = par[u]) path.push_back(u);
  std::reverse(path.begin(), path.end());
  return path;
}

}  // namespace

std::pair<JoinTree, std::vector<int>> contract_path(const JoinTree& t, int from,
                                                    int to) {
  const int n = static_cast<int>(t.nodes.size());
  if (from < 0 || from >= n || to < 0 || to >= n)
    throw std::invalid_argument("contract_path: node out of range");
  JoinTree cur = t;
  std::vector<int> path = tree_path(cur, from, to);
  bool changed = true;
  while (changed) {
    changed = false;
    for (size_t i = 0; i + 2 < path.size() && !changed; ++i) {
      for (size_t l = i + 2; l < path.size() && !changed; ++l) {
        VarSet ends = cur.nodes[path[i]] & cur.nodes[path[l]];
        for (size_t j = i; j + 1 <= l && !changed; ++j) {
          VarSet link = cur.nodes[path[j]] & cur.nodes[path[j + 1]];
          if ((link & ~ends) != 0) continue;
          auto is_edge = [&](int a, int b) {
            return std::pair(path[j], path[j + 1]) == std::pair(a, b) ||
                   std::pair(path[j + 1], path[j]) == std::pair(a, b);
          };
          auto it = std::find_if(cur.edges.begin(), cur.edges.end(),
                                 [&](auto& e) { return is_edge(e.first, e.second); });
          cur.edges.erase(it);
          cur.edges.emplace_back(path[i], path[l]);
          path = tree_path(cur, from, to);
          changed = true;
        }
      }
    }
  }
  return {cur, path};
}

static std::string var_list_str(VarSet s, const std::vector<std::string>& names) {
  std::string out;
  for (VarId v : set_to_vars(s)) {
    if (!out.empty()) out += ",";
    out += names[v];
  }
  return out;
}

std::string tree_to_json(const ExtConnexTree& t,
                         const std::vector<std::string>& names) {
  std::ostringstream os;
  os << "{\"nodes\":[";
  for (size_t i = 0; i < t.nodes.size(); ++i) {
    if (i) os << ",";
    os << "{\"id\":" << i << ",\"vars\":\"" << var_list_str(t.nodes[i], names)
       << "\",\"connex\":" << (t.connex[i] ? "true" : "false") << "}";
  }
  os << "],\"edges\":[";
  for (size_t i = 0; i < t.edges.size(); ++i) {
    if (i) os << ",";
    os << "[" << t.edges[i].first << "," << t.edges[i].second << "]";
  }
  os << "]}";
  return os.str();
}

std::string tree_to_dot(const ExtConnexTree& t,
                        const std::vector<std::string>& names) {
  std::ostringstream os;
  os << "graph ext_connex_tree {\n";
  for (size_t i = 0; i < t.nodes.size(); ++i) {
    os << "  n" << i << " [label=\"{" << var_list_str(t.nodes[i], names) << "}\"";
    if (t.connex[i]) os << " style=dashed";
    os << "];\n";
  }
  for (auto [a, b] : t.edges) os << "  n" << a << " -- n" << b << ";\n";
  os << "}\n";
  return os.str();
}

}  // namespace ucq
