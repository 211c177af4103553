#include "ucq/engine.hpp"

#include <algorithm>
#include <bit>

#include <json.hpp>

namespace ucq {

void StepCounter::emitted() {
  ++answers;
  max_delay = std::max(max_delay, cur);
  delay_histogram[cur == 0 ? 0 : std::bit_width(cur)]++;
  cur = 0;
}

namespace {

std::vector<Atom> atom_views(const std::vector<VirtualAtom>& ext) {
  std::vector<Atom> out;
  for (const VirtualAtom& a : ext) out.push_back(Atom{a.rel, a.args});
  return out;
}

// Pattern-matched assignments of one atom over its tuples, projected to the
// node's variables. Repeated argument positions must agree.
void project_rows(const Atom& atom,
                  const std::vector<std::vector<ValId>>& tuples,
                  const std::vector<VarId>& node_vars,
                  std::vector<std::vector<ValId>>& rows, StepCounter& sc) {
  std::vector<int> pos;  // first argument position per node var
  for (VarId v : node_vars) {
    auto it = std::find(atom.args.begin(), atom.args.end(), v);
    pos.push_back(static_cast<int>(it - atom.args.begin()));
  }
  for (const auto& t : tuples) {
    sc.step();
    bool ok = true;
    for (size_t i = 0; i < atom.args.size() && ok; ++i)
      for (size_t j = i + 1; j < atom.args.size() && ok; ++j)
        if (atom.args[i] == atom.args[j] && t[i] != t[j]) ok = false;
    if (!ok) continue;
    std::vector<ValId> row;
    row.reserve(node_vars.size());
    for (int p : pos) row.push_back(t[p]);
    rows.push_back(std::move(row));
  }
  std::sort(rows.begin(), rows.end());
  rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
}

void build_node_index(NodeRel& nr, StepCounter& sc) {
  nr.buckets.clear();
  nr.row_set.clear();
  if (nr.rows.empty()) return;
  auto key_of = [&](const std::vector<ValId>& row) {
    std::vector<ValId> key;
    key.reserve(nr.key_pos.size());
    for (int p : nr.key_pos) key.push_back(row[p]);
    return key;
  };
  std::sort(nr.rows.begin(), nr.rows.end(),
            [&](const auto& a, const auto& b) {
              auto ka = key_of(a), kb = key_of(b);
              if (ka != kb) return ka < kb;
              return a < b;
            });
  int begin = 0;
  for (int i = 0; i <= static_cast<int>(nr.rows.size()); ++i) {
    if (i == static_cast<int>(nr.rows.size()) ||
        (i > begin && key_of(nr.rows[i]) != key_of(nr.rows[begin]))) {
      nr.buckets.emplace(key_of(nr.rows[begin]), std::pair(begin, i));
      begin = i;
      if (i == static_cast<int>(nr.rows.size())) break;
    }
    if (i < static_cast<int>(nr.rows.size())) {
      nr.row_set.insert(nr.rows[i]);
      sc.step();
    }
  }
}

}  // namespace

BoundTree bind_tree(const UCQ& q, int disjunct,
                    const std::vector<VirtualAtom>& ext,
                    const ExtConnexTree& tree, const Database& db,
                    const VirtualRels& virt, StepCounter& sc) {
  const CQ& cq = q.disjuncts[disjunct];
  BoundTree bt;
  bt.tree = tree;
  bt.var_count = cq.var_count();
  const int nn = static_cast<int>(tree.nodes.size());

  // root at the first connex node; parents via BFS
  int root = 0;
  for (int i = 0; i < nn; ++i)
    if (tree.connex[i]) {
      root = i;
      break;
    }
  std::vector<std::vector<int>> adj(nn);
  for (auto [a, b] : tree.edges) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  for (auto& v : adj) std::sort(v.begin(), v.end());
  bt.parent.assign(nn, -1);
  std::vector<char> vis(nn, 0);

  // connex region first, then the rest outward; parents precede children
  bool has_connex =
      std::any_of(tree.connex.begin(), tree.connex.end(), [](char c) { return c; });
  std::vector<int> frontier{root};
  vis[root] = 1;
  bt.order.push_back(root);
  if (has_connex) {
    for (size_t qi = 0; qi < frontier.size(); ++qi) {
      int u = frontier[qi];
      for (int w : adj[u])
        if (!vis[w] && tree.connex[w]) {
          vis[w] = 1;
          bt.parent[w] = u;
          bt.order.push_back(w);
          frontier.push_back(w);
        }
    }
  }
  bt.n_connex = has_connex ? static_cast<int>(bt.order.size()) : 0;
  std::vector<int> outer = bt.order;
  for (size_t qi = 0; qi < outer.size(); ++qi) {
    int u = outer[qi];
    for (int w : adj[u])
      if (!vis[w]) {
        vis[w] = 1;
        bt.parent[w] = u;
        bt.order.push_back(w);
        outer.push_back(w);
      }
  }

  // atom index -> (atom view, tuple source)
  auto atom_at = [&](int idx) -> Atom {
    if (idx < static_cast<int>(cq.body.size())) return cq.body[idx];
    return Atom{ext[idx - cq.body.size()].rel, ext[idx - cq.body.size()].args};
  };
  auto tuples_at = [&](int idx) -> const std::vector<std::vector<ValId>>& {
    if (idx < static_cast<int>(cq.body.size())) {
      const Atom& atom = cq.body[idx];
      int rid = db.find_relation(q.rel_names[atom.rel]);
      if (rid < 0)
        throw EngineError("unknown relation " + q.rel_names[atom.rel] +
                          " at bind time");
      if (db.relations[rid].arity != static_cast<int>(atom.args.size()))
        throw EngineError("arity mismatch for relation " +
                          q.rel_names[atom.rel]);
      return db.relations[rid].tuples;
    }
    int k = idx - static_cast<int>(cq.body.size());
    if (disjunct >= static_cast<int>(virt.size()) ||
        k >= static_cast<int>(virt[disjunct].size()))
      throw EngineError("virtual relation bound before instantiation");
    return virt[disjunct][k];
  };
  const int total_atoms = static_cast<int>(cq.body.size() + ext.size());

  bt.rels.resize(nn);
  for (int i = 0; i < nn; ++i) {
    NodeRel& nr = bt.rels[i];
    nr.vars = set_to_vars(tree.nodes[i]);
    int cover = tree.cover_atom[i];
    VarSet edge = atom_at(cover).var_set();
    // atoms sharing the covering edge's variable set collapse into one node;
    // the node relation satisfies all of them
    project_rows(atom_at(cover), tuples_at(cover), nr.vars, nr.rows, sc);
    for (int a = 0; a < total_atoms; ++a) {
      if (a == cover || atom_at(a).var_set() != edge) continue;
      std::vector<std::vector<ValId>> other;
      project_rows(atom_at(a), tuples_at(a), nr.vars, other, sc);
      TupleSet keep(other.begin(), other.end());
      std::vector<std::vector<ValId>> merged;
      for (auto& row : nr.rows) {
        sc.step();
        if (keep.contains(row)) merged.push_back(std::move(row));
      }
      nr.rows = std::move(merged);
    }

    int p = bt.parent[i];
    if (p >= 0) {
      VarSet shared = tree.nodes[i] & tree.nodes[p];
      for (size_t k = 0; k < nr.vars.size(); ++k)
        if (contains(shared, nr.vars[k])) nr.key_pos.push_back(static_cast<int>(k));
    }
  }
  for (int i = 0; i < nn; ++i) build_node_index(bt.rels[i], sc);
  bt.empty = std::any_of(bt.rels.begin(), bt.rels.end(),
                         [](const NodeRel& r) { return r.rows.empty(); });
  return bt;
}

void yannakakis_reduce(BoundTree& bt, StepCounter& sc) {
  const int nn = static_cast<int>(bt.tree.nodes.size());
  auto semijoin = [&](int keep, int with) {
    VarSet shared = bt.tree.nodes[keep] & bt.tree.nodes[with];
    std::vector<int> kp, wp;
    for (size_t k = 0; k < bt.rels[keep].vars.size(); ++k)
      if (contains(shared, bt.rels[keep].vars[k])) kp.push_back(static_cast<int>(k));
    for (size_t k = 0; k < bt.rels[with].vars.size(); ++k)
      if (contains(shared, bt.rels[with].vars[k])) wp.push_back(static_cast<int>(k));
    TupleSet keys;
    for (const auto& row : bt.rels[with].rows) {
      std::vector<ValId> key;
      for (int p : wp) key.push_back(row[p]);
      keys.insert(std::move(key));
      sc.step();
    }
    auto& rows = bt.rels[keep].rows;
    std::vector<std::vector<ValId>> kept;
    for (auto& row : rows) {
      std::vector<ValId> key;
      for (int p : kp) key.push_back(row[p]);
      sc.step();
      if (keys.contains(key)) kept.push_back(std::move(row));
    }
    rows = std::move(kept);
  };
  // leaf to root
  for (int oi = nn - 1; oi > 0; --oi) {
    int u = bt.order[oi];
    semijoin(bt.parent[u], u);
  }
  // root to leaf
  for (int oi = 1; oi < nn; ++oi) {
    int u = bt.order[oi];
    semijoin(u, bt.parent[u]);
  }
  for (int i = 0; i < nn; ++i) build_node_index(bt.rels[i], sc);
  bt.empty = std::any_of(bt.rels.begin(), bt.rels.end(),
                         [](const NodeRel& r) { return r.rows.empty(); });
}

void corrupt_one_row(BoundTree& bt) {
  StepCounter sc;
  // connex nodes first: those back the enumeration and membership probes
  for (int u : bt.order) {
    NodeRel& nr = bt.rels[u];
    if (nr.rows.empty()) continue;
    nr.rows.pop_back();
    build_node_index(nr, sc);
    return;
  }
}

CdyEnumerator::CdyEnumerator(const BoundTree& bt, StepCounter& sc,
                             bool extend_full)
    : bt_(bt), sc_(sc), extend_full_(extend_full) {
  assign_.assign(bt.var_count, -1);
  cursor_.assign(bt.n_connex, {0, 0});
}

bool CdyEnumerator::descend(int level) {
  for (int l = level; l < bt_.n_connex; ++l) {
    const NodeRel& nr = bt_.rels[bt_.order[l]];
    std::vector<ValId> key;
    for (int p : nr.key_pos) key.push_back(assign_[nr.vars[p]]);
    sc_.step();  // index probe
    auto it = nr.buckets.find(key);
    if (it == nr.buckets.end()) return false;
    cursor_[l] = it->second;
    const auto& row = nr.rows[cursor_[l].first];
    for (size_t k = 0; k < nr.vars.size(); ++k) assign_[nr.vars[k]] = row[k];
  }
  return true;
}

const std::vector<ValId>* CdyEnumerator::next() {
  if (done_) return nullptr;
  bool have = false;
  if (!started_) {
    started_ = true;
    have = !bt_.empty && descend(0);
  } else if (bt_.n_connex == 0) {
    have = false;  // the single empty assignment was already produced
  } else {
    int k = bt_.n_connex - 1;
    while (k >= 0) {
      sc_.step();  // cursor advance
      if (++cursor_[k].first < cursor_[k].second) {
        const NodeRel& nr = bt_.rels[bt_.order[k]];
        const auto& row = nr.rows[cursor_[k].first];
        for (size_t i = 0; i < nr.vars.size(); ++i) assign_[nr.vars[i]] = row[i];
        if (descend(k + 1)) {
          have = true;
          break;
        }
      } else {
        --k;
      }
    }
  }
  if (!have) {
    done_ = true;
    return nullptr;
  }
  if (extend_full_) {
    for (size_t oi = bt_.n_connex; oi < bt_.order.size(); ++oi) {
      const NodeRel& nr = bt_.rels[bt_.order[oi]];
      std::vector<ValId> key;
      for (int p : nr.key_pos) key.push_back(assign_[nr.vars[p]]);
      sc_.step();
      auto it = nr.buckets.find(key);
      if (it == nr.buckets.end())
        throw EngineError("dangling tuple after full reduction");
      const auto& row = nr.rows[it->second.first];
      for (size_t k = 0; k < nr.vars.size(); ++k) assign_[nr.vars[k]] = row[k];
    }
  }
  sc_.step();  // emission
  return &assign_;
}

bool membership_test(const UCQ& q, int disjunct, const BoundTree& bt,
                     const std::vector<ValId>& answer) {
  if (bt.empty) return false;
  const CQ& cq = q.disjuncts[disjunct];
  std::vector<ValId> assign(cq.var_count(), -1);
  for (size_t k = 0; k < cq.head.size(); ++k) {
    VarId v = cq.head[k];
    if (assign[v] != -1 && assign[v] != answer[k]) return false;
    assign[v] = answer[k];
  }
  for (int i = 0; i < bt.n_connex; ++i) {
    const NodeRel& nr = bt.rels[bt.order[i]];
    std::vector<ValId> row;
    row.reserve(nr.vars.size());
    for (VarId v : nr.vars) row.push_back(assign[v]);
    if (!nr.row_set.contains(row)) return false;
  }
  return true;
}

VirtualInstantiation instantiate_virtual(const UCQ& q, const Certificate& cert,
                                         int consumer, int atom_idx,
                                         const Database& db,
                                         const VirtualRels& virt,
                                         StepCounter& sc) {
  const VirtualAtom& va = cert.extensions[consumer].atoms[atom_idx];
  const ProvidesWitness& w = va.witness;
  const CQ& provider = q.disjuncts[w.provider];
  if (w.provider >= static_cast<int>(virt.size()) ||
      static_cast<int>(virt[w.provider].size()) < w.provider_atom_count)
    throw EngineError("instantiate_virtual: provider extension instantiated "
                      "out of dependency order");

  std::vector<VirtualAtom> prefix(
      cert.extensions[w.provider].atoms.begin(),
      cert.extensions[w.provider].atoms.begin() + w.provider_atom_count);
  bool was_pre = sc.in_pre;
  sc.in_pre = true;
  BoundTree bt = bind_tree(q, w.provider, prefix, w.tree, db, virt, sc);
  yannakakis_reduce(bt, sc);
  sc.in_pre = was_pre;

  // h⁻¹ per argument position
  std::vector<std::vector<VarId>> pre_image(va.args.size());
  for (size_t ai = 0; ai < va.args.size(); ++ai)
    for (VarId v2 : set_to_vars(w.v2))
      if (w.hom.map[v2] == va.args[ai]) pre_image[ai].push_back(v2);

  VirtualInstantiation out;
  TupleSet seen;
  CdyEnumerator en(bt, sc, /*extend_full=*/true);
  while (const auto* full = en.next()) {
    std::vector<ValId> m_answer;
    m_answer.reserve(provider.head.size());
    for (VarId v : provider.head) m_answer.push_back((*full)[v]);
    out.provider_answers.push_back(std::move(m_answer));

    std::vector<ValId> tuple(va.args.size());
    bool defined = true;
    for (size_t ai = 0; ai < va.args.size() && defined; ++ai) {
      ValId val = (*full)[pre_image[ai][0]];
      for (VarId v2 : pre_image[ai])
        if ((*full)[v2] != val) defined = false;
      tuple[ai] = val;
    }
    sc.step();
    if (defined && !seen.contains(tuple)) {
      seen.insert(tuple);
      out.relation.push_back(std::move(tuple));
    }
  }
  return out;
}

StreamRegularizer::StreamRegularizer(Pull pull, const StepCounter* clock,
                                     std::function<std::uint64_t()> base,
                                     std::uint64_t m, std::uint64_t d)
    : pull_(std::move(pull)), clock_(clock), base_(std::move(base)), m_(m),
      d_(d) {}

std::optional<std::vector<ValId>> StreamRegularizer::next() {
  while (!raw_done_) {
    std::uint64_t need = base_() + (emitted_ + 1) * m_ * d_;
    if (clock_->total >= need && !queue_.empty()) break;
    auto a = pull_();
    if (!a) {
      raw_done_ = true;
      break;
    }
    int& count = seen_[*a];
    ++count;
    if (count == 1) queue_.push_back(std::move(*a));
    if (count > static_cast<int>(m_))
      throw EngineError(
          "budget-model violation: a result was produced more than m times");
  }
  if (queue_.empty()) {
    if (raw_done_) return std::nullopt;
    throw EngineError("budget-model violation: queue empty at emission point");
  }
  auto out = std::move(queue_.front());
  queue_.pop_front();
  ++emitted_;
  return out;
}

std::vector<std::vector<ValId>> cheater_wrapper(
    const std::vector<std::pair<std::vector<ValId>, std::uint64_t>>& raw,
    std::uint64_t n, std::uint64_t m, std::uint64_t p, std::uint64_t d) {
  StepCounter clock;
  size_t idx = 0;
  auto pull = [&]() -> std::optional<std::vector<ValId>> {
    if (idx >= raw.size()) return std::nullopt;
    clock.step(raw[idx].second);
    return raw[idx++].first;
  };
  StreamRegularizer reg(pull, &clock, [=] { return n * p; }, m, d);
  std::vector<std::vector<ValId>> out;
  while (auto a = reg.next()) out.push_back(std::move(*a));
  return out;
}

struct UcqEnumerator::Impl {
  const UCQ& q;
  const Certificate& cert;
  const Database& db;
  EnumMode mode;
  StepCounter sc;
  bool corrupt;

  // general mode
  struct Stage {
    bool virtual_stage;
    int cq, atom;
  };
  std::vector<Stage> stages;
  size_t stage_idx = 0;
  bool stage_open = false;
  VirtualRels virt;
  std::vector<ExtConnexTree> ext_trees;
  std::unique_ptr<BoundTree> cur_bt;
  std::unique_ptr<CdyEnumerator> cur_en;
  std::vector<std::vector<VarId>> cur_pre_image;
  TupleSet cur_seen;
  std::vector<std::vector<ValId>> cur_rel;
  std::unique_ptr<StreamRegularizer> reg;

  // interleave mode
  std::vector<BoundTree> trees;
  std::vector<std::unique_ptr<CdyEnumerator>> streams;
  std::vector<char> drained;

  Impl(const UCQ& q, const Certificate& cert, const Database& db,
       EnumMode mode, bool corrupt)
      : q(q), cert(cert), db(db), mode(mode), corrupt(corrupt) {
    const int n = static_cast<int>(q.disjuncts.size());
    if (static_cast<int>(cert.extensions.size()) != n)
      throw EngineError("certificate does not match the query");
    virt.resize(n);
    for (int i = 0; i < n; ++i) virt[i].resize(cert.extensions[i].atoms.size());

    std::uint64_t total_virtual = 0;
    std::size_t max_nodes = 1;
    ext_trees.resize(n);
    for (int i = 0; i < n; ++i) {
      const auto& ext = cert.extensions[i].atoms;
      total_virtual += ext.size();
      auto t = free_connex_tree(hypergraph_of(q.disjuncts[i], atom_views(ext)),
                                q.disjuncts[i].free_set());
      if (!t)
        throw EngineError("certificate extension for " + q.disjuncts[i].name +
                          " is not free-connex");
      ext_trees[i] = std::move(*t);
      max_nodes = std::max(max_nodes, ext_trees[i].nodes.size());
      for (const VirtualAtom& a : ext)
        max_nodes = std::max(max_nodes, a.witness.tree.nodes.size());
    }

    if (mode == EnumMode::Interleave) {
      if (total_virtual != 0)
        throw std::invalid_argument(
            "interleave mode requires every union extension to be empty");
      sc.in_pre = true;
      for (int i = 0; i < n; ++i) {
        trees.push_back(
            bind_tree(q, i, {}, ext_trees[i], db, virt, sc));
        yannakakis_reduce(trees.back(), sc);
        if (corrupt && i == 0) corrupt_one_row(trees.back());
      }
      sc.in_pre = false;
      for (int i = 0; i < n; ++i)
        streams.push_back(std::make_unique<CdyEnumerator>(trees[i], sc, false));
      drained.assign(n, 0);
      return;
    }

    // instantiation order: depth, then disjunct, then atom index
    std::vector<std::tuple<int, int, int>> vstages;
    for (int i = 0; i < n; ++i)
      for (size_t a = 0; a < cert.extensions[i].atoms.size(); ++a)
        vstages.emplace_back(cert.extensions[i].atoms[a].depth, i,
                             static_cast<int>(a));
    std::sort(vstages.begin(), vstages.end());
    for (auto [d, i, a] : vstages) stages.push_back(Stage{true, i, a});
    for (int i = 0; i < n; ++i) stages.push_back(Stage{false, i, -1});

    std::uint64_t m = q.disjuncts.size() + total_virtual;
    std::uint64_t d = 16 * (max_nodes + q.head_arity) + 32;
    reg = std::make_unique<StreamRegularizer>(
        [this] { return pull(); }, &sc, [this] { return sc.pre; }, m, d);
  }

  void open_stage() {
    const Stage& st = stages[stage_idx];
    sc.in_pre = true;
    if (st.virtual_stage) {
      const VirtualAtom& va = cert.extensions[st.cq].atoms[st.atom];
      const ProvidesWitness& w = va.witness;
      std::vector<VirtualAtom> prefix(
          cert.extensions[w.provider].atoms.begin(),
          cert.extensions[w.provider].atoms.begin() + w.provider_atom_count);
      cur_bt = std::make_unique<BoundTree>(
          bind_tree(q, w.provider, prefix, w.tree, db, virt, sc));
      yannakakis_reduce(*cur_bt, sc);
      cur_pre_image.assign(va.args.size(), {});
      for (size_t ai = 0; ai < va.args.size(); ++ai)
        for (VarId v2 : set_to_vars(w.v2))
          if (w.hom.map[v2] == va.args[ai]) cur_pre_image[ai].push_back(v2);
      cur_seen.clear();
      cur_rel.clear();
      cur_en = std::make_unique<CdyEnumerator>(*cur_bt, sc, true);
    } else {
      cur_bt = std::make_unique<BoundTree>(
          bind_tree(q, st.cq, cert.extensions[st.cq].atoms, ext_trees[st.cq],
                    db, virt, sc));
      yannakakis_reduce(*cur_bt, sc);
      if (corrupt && st.cq == 0) corrupt_one_row(*cur_bt);
      cur_en = std::make_unique<CdyEnumerator>(*cur_bt, sc, false);
    }
    sc.in_pre = false;
    stage_open = true;
  }

  std::optional<std::vector<ValId>> pull() {
    while (stage_idx < stages.size()) {
      if (!stage_open) open_stage();
      const Stage& st = stages[stage_idx];
      const auto* full = cur_en->next();
      if (!full) {
        if (st.virtual_stage) virt[st.cq][st.atom] = std::move(cur_rel);
        stage_open = false;
        ++stage_idx;
        continue;
      }
      if (st.virtual_stage) {
        const VirtualAtom& va = cert.extensions[st.cq].atoms[st.atom];
        const CQ& provider = q.disjuncts[va.witness.provider];
        std::vector<ValId> tuple(va.args.size());
        bool defined = true;
        for (size_t ai = 0; ai < va.args.size() && defined; ++ai) {
          ValId val = (*full)[cur_pre_image[ai][0]];
          for (VarId v2 : cur_pre_image[ai])
            if ((*full)[v2] != val) defined = false;
          tuple[ai] = val;
        }
        sc.step();
        if (defined && !cur_seen.contains(tuple)) {
          cur_seen.insert(tuple);
          cur_rel.push_back(std::move(tuple));
        }
        std::vector<ValId> answer;
        answer.reserve(provider.head.size());
        for (VarId v : provider.head) answer.push_back((*full)[v]);
        return answer;
      }
      const CQ& cq = q.disjuncts[st.cq];
      std::vector<ValId> answer;
      answer.reserve(cq.head.size());
      for (VarId v : cq.head) answer.push_back((*full)[v]);
      return answer;
    }
    return std::nullopt;
  }

  // Algorithm: advance the head stream; an answer also produced by the rest
  // of the union is swapped for the rest's next answer, which always exists.
  std::optional<std::vector<ValId>> interleave_next(int i) {
    const int n = static_cast<int>(q.disjuncts.size());
    if (i == n - 1) return stream_next(i);
    if (!drained[i]) {
      if (auto a = stream_next(i)) {
        if (!member_rest(i + 1, *a)) return a;
        auto b = interleave_next(i + 1);
        if (!b)
          throw EngineError("interleave: rest-of-union stream exhausted early");
        return b;
      }
      drained[i] = 1;
    }
    return interleave_next(i + 1);
  }

  bool member_rest(int from, const std::vector<ValId>& a) {
    for (int k = from; k < static_cast<int>(q.disjuncts.size()); ++k) {
      sc.step();
      if (membership_test(q, k, trees[k], a)) return true;
    }
    return false;
  }

  std::optional<std::vector<ValId>> stream_next(int i) {
    const auto* full = streams[i]->next();
    if (!full) return std::nullopt;
    std::vector<ValId> answer;
    for (VarId v : q.disjuncts[i].head) answer.push_back((*full)[v]);
    return answer;
  }

  std::optional<std::vector<ValId>> next() {
    std::optional<std::vector<ValId>> out;
    if (mode == EnumMode::General)
      out = reg->next();
    else
      out = interleave_next(0);
    if (out) sc.emitted();
    return out;
  }
};

UcqEnumerator::UcqEnumerator(const UCQ& q, const Certificate& cert,
                             const Database& db, EnumMode mode,
                             bool corrupt_test_hook)
    : impl_(std::make_unique<Impl>(q, cert, db, mode, corrupt_test_hook)) {}

UcqEnumerator::~UcqEnumerator() = default;

std::optional<std::vector<ValId>> UcqEnumerator::next() { return impl_->next(); }

const StepCounter& UcqEnumerator::stats() const { return impl_->sc; }

const Database& UcqEnumerator::db() const { return impl_->db; }

std::string stats_to_json(const StepCounter& sc) {
  nlohmann::json out;
  out["preprocessing_steps"] = sc.pre;
  out["answers"] = sc.answers;
  out["max_answer_steps"] = sc.max_delay;
  out["total_steps"] = sc.total;
  nlohmann::json hist = nlohmann::json::array();
  for (int i = 0; i < 32; ++i) hist.push_back(sc.delay_histogram[i]);
  out["delay_histogram_log2"] = hist;
  return out.dump();
}

}  // namespace ucq
