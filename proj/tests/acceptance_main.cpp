// Acceptance suite: runs every acceptance criterion at its stated tolerance
// and prints one pass/fail line per criterion.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <set>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <vector>

#include "ucq/classifier.hpp"
#include "ucq/engine.hpp"
#include "ucq/testkit.hpp"

using namespace ucq;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

void report(int criterion, const std::string& name, bool ok,
            const std::string& detail, double seconds) {
  std::printf("[%s] criterion %d: %s (%s, %.2fs)\n", ok ? "PASS" : "FAIL",
              criterion, name.c_str(), detail.c_str(), seconds);
  if (!ok) ++failures;
}

UCQ qfile(const std::string& name) {
  for (const char* prefix : {"queries/", "../queries/", "../../queries/"}) {
    std::ifstream in(prefix + name);
    if (in.good()) {
      std::stringstream buf;
      buf << in.rdbuf();
      return parse_ucq(buf.str());
    }
  }
  throw DataError("query file not found: " + name);
}

std::set<std::vector<ValId>> run_union(const UCQ& q, const Certificate& cert,
                                       const Database& db, bool* dup_free,
                                       StepCounter* stats = nullptr) {
  UcqEnumerator en(q, cert, db, EnumMode::General);
  std::set<std::vector<ValId>> got;
  bool df = true;
  while (auto a = en.next())
    if (!got.insert(*a).second) df = false;
  if (dup_free) *dup_free = df;
  if (stats) *stats = en.stats();
  return got;
}

// ---- criterion 1: golden classification suite ------------------------------

void criterion1() {
  auto t0 = Clock::now();
  struct Row {
    const char* file;
    Tractability kind;
    const char* hypothesis;  // empty = unchecked
  };
  const std::vector<Row> rows = {
      {"intro.ucq", Tractability::Tractable, ""},
      {"yellow.ucq", Tractability::Tractable, ""},
      {"hards_are_easy.ucq", Tractability::Tractable, ""},
      {"body_iso_matmul.ucq", Tractability::Intractable, "mat-mul"},
      {"acyclic_4clique.ucq", Tractability::Intractable, "4-clique"},
      {"intractables.ucq", Tractability::Intractable, ""},
      {"cyclic_easy.ucq", Tractability::Tractable, ""},
      {"separated.ucq", Tractability::Unknown, ""},
      {"star4.ucq", Tractability::Unknown, ""},
      {"cyclic_guarded_hard.ucq", Tractability::Unknown, ""},
      {"newtetra3.ucq", Tractability::Unknown, ""},
  };
  int ok = 0;
  std::string detail;
  for (const Row& r : rows) {
    Verdict v = classify(qfile(r.file));
    bool match = v.kind == r.kind &&
                 (std::string(r.hypothesis).empty() || v.hypothesis == r.hypothesis);
    if (match)
      ++ok;
    else
      detail += std::string(" ") + r.file;
  }
  double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  bool pass = ok == 11 && secs < 1.0;
  report(1, "golden classification suite", pass,
         std::to_string(ok) + "/11 verdicts" +
             (detail.empty() ? "" : "; mismatched:" + detail) +
             (secs < 1.0 ? "" : "; over time budget"),
         secs);
}

// ---- criterion 2: oracle equivalence ---------------------------------------

void criterion2() {
  auto t0 = Clock::now();
  const std::vector<const char*> tractable = {
      "intro.ucq", "yellow.ucq", "hards_are_easy.ucq", "cyclic_easy.ucq"};
  long long runs = 0, bad = 0;
  for (const char* f : tractable) {
    Verdict v = classify(qfile(f));
    if (v.kind != Tractability::Tractable) {
      ++bad;
      continue;
    }
    for (std::uint64_t seed = 1; seed <= 200; ++seed) {
      Database db = gen_random(seed, v.query, 8, 6);
      bool dup_free = true;
      auto got = run_union(v.query, *v.certificate, db, &dup_free);
      auto expect = brute_force_eval(v.query, db);
      ++runs;
      if (!dup_free || got != expect) ++bad;
    }
  }
  double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  report(2, "oracle equivalence on 200 random databases per tractable golden",
         bad == 0, std::to_string(runs - bad) + "/" + std::to_string(runs),
         secs);
}

// ---- criterion 3: delay constancy and preprocessing linearity --------------

void criterion3() {
  auto t0 = Clock::now();
  const std::vector<const char*> tractable = {
      "intro.ucq", "yellow.ucq", "hards_are_easy.ucq", "cyclic_easy.ucq"};
  bool pass = true;
  std::string detail;
  for (const char* f : tractable) {
    Verdict v = classify(qfile(f));
    // Densify the instance until the stream is long enough to measure: halve
    // the domain (deterministically) while the query returns < 32 answers.
    auto measure = [&](int n) {
      StepCounter sc;
      for (int domain = n; domain >= 2; domain /= 2) {
        Database db = gen_random(7, v.query, n, domain);
        sc = StepCounter{};
        bool df = true;
        run_union(v.query, *v.certificate, db, &df, &sc);
        if (sc.answers >= 32) break;
      }
      return sc;
    };
    StepCounter s100 = measure(100), s1000 = measure(1000),
                s10000 = measure(10000);
    double delay_ratio =
        static_cast<double>(std::max({s100.max_delay, s1000.max_delay,
                                      s10000.max_delay})) /
        static_cast<double>(std::max<std::uint64_t>(
            1, std::min({s100.max_delay, s1000.max_delay, s10000.max_delay})));
    bool delay_ok = delay_ratio <= 1.5;
    // preprocessing within 1.5x of linear, amortized over 5 doublings
    std::vector<int> sizes = {625, 1250, 2500, 5000, 10000};
    std::vector<double> norm;
    for (int n : sizes)
      norm.push_back(static_cast<double>(measure(n).pre) / n);
    double worst = 1.0;
    for (size_t i = 1; i < norm.size(); ++i)
      worst = std::max(worst, norm[i] / norm[i - 1]);
    double amortized = std::pow(norm.back() / norm.front(), 1.0 / 4.0);
    bool pre_ok = amortized <= 1.5;
    if (!delay_ok || !pre_ok) {
      pass = false;
      detail += std::string(" ") + f + (delay_ok ? "" : " delay") +
                (pre_ok ? "" : " preprocessing");
    }
    char buf[160];
    std::snprintf(buf, sizeof(buf), " %s: delay x%.3f, linearity x%.3f (worst step x%.3f);",
                  f, delay_ratio, amortized, worst);
    detail += buf;
  }
  double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  report(3, "delay constancy and preprocessing linearity", pass && secs < 60.0,
         detail, secs);
}

// ---- criterion 4: structural cross-checks ----------------------------------

void criterion4() {
  auto t0 = Clock::now();
  QueryShape shape;
  shape.max_disjuncts = 1;
  shape.max_atoms = 5;
  shape.max_vars = 6;
  int seen = 0, bad = 0;
  // exhaustive join-tree search via Prüfer enumeration lives in the unit
  // helpers; replicated here in compact form
  auto all_trees_ok = [](const Hypergraph& h) {
    const int n = static_cast<int>(h.edges.size());
    if (n == 1) return true;
    std::vector<int> seq(n - 2, 0);
    while (true) {
      std::vector<int> degree(n, 1);
      for (int x : seq) degree[x]++;
      std::vector<std::pair<int, int>> edges;
      std::set<int> leaves;
      for (int i = 0; i < n; ++i)
        if (degree[i] == 1) leaves.insert(i);
      for (int x : seq) {
        int leaf = *leaves.begin();
        leaves.erase(leaves.begin());
        edges.emplace_back(leaf, x);
        if (--degree[x] == 1) leaves.insert(x);
      }
      edges.emplace_back(*leaves.begin(), *std::next(leaves.begin()));
      if (check_join_tree(JoinTree{h.edges, edges})) return true;
      int k = n - 3;
      while (k >= 0 && seq[k] == n - 1) seq[k--] = 0;
      if (k < 0) break;
      seq[k]++;
    }
    return false;
  };
  for (std::uint64_t seed = 1; seen < 500 && seed < 20000; ++seed) {
    UCQ q = gen_random_query(seed, shape);
    Hypergraph h = hypergraph_of(q.disjuncts[0]);
    bool gyo = is_acyclic(h);
    if (gyo != all_trees_ok(h)) ++bad;
    if (!gyo) continue;
    ++seen;
    bool fc = is_free_connex(q, 0).has_value();
    bool no_paths = free_paths(q, 0).empty();
    if (fc != no_paths) ++bad;
    auto t = gyo_join_tree(h);
    if (!t || !check_join_tree(*t)) ++bad;
  }
  double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  report(4, "structural cross-checks on 500 random acyclic CQs",
         seen == 500 && bad == 0,
         std::to_string(seen) + " acyclic CQs, " + std::to_string(bad) +
             " disagreements",
         secs);
}

// ---- criterion 5: reduction validity ----------------------------------------

void criterion5() {
  auto t0 = Clock::now();
  std::string detail;
  bool pass = true;

  // (a) matmul: exhaustive over all 3x3 boolean pairs
  {
    UCQ q = qfile("intro.ucq");
    auto path = free_paths(q, 0)[0].vars;
    const CQ& cq = q.disjuncts[0];
    VarId xv = -1, yv = -1;
    for (int v = 0; v < cq.var_count(); ++v) {
      if (cq.var_names[v] == "x") xv = v;
      if (cq.var_names[v] == "y") yv = v;
    }
    long long bad = 0;
    for (int am = 0; am < 512; ++am) {
      for (int bm = 0; bm < 512; ++bm) {
        BoolMatrix a, b;
        for (int bit = 0; bit < 9; ++bit) {
          int r = bit / 3 + 1, c = bit % 3 + 1;
          if ((am >> bit) & 1) a.emplace_back(r, c);
          if ((bm >> bit) & 1) b.emplace_back(r, c);
        }
        Database db = gen_matmul(a, b, q, 0, path, 1);
        auto rows = brute_force_project(q, 0, db, {xv, yv});
        // triple-loop boolean product
        bool ma[4][4] = {}, mb[4][4] = {};
        for (auto [r, c] : a) ma[r][c] = true;
        for (auto [r, c] : b) mb[r][c] = true;
        std::set<std::vector<ValId>> expect;
        for (int i = 1; i <= 3; ++i)
          for (int j = 1; j <= 3; ++j)
            for (int k = 1; k <= 3; ++k)
              if (ma[i][k] && mb[k][j])
                expect.insert({db.dict.find(std::to_string(i)),
                               db.dict.find(std::to_string(j))});
        if (rows != expect) ++bad;
      }
    }
    if (bad) pass = false;
    detail += "matmul " + std::to_string(262144 - bad) + "/262144;";
  }

  // (b) var-tagged exact reduction on 100 random instances
  {
    UCQ q = qfile("intractables.ucq");
    int bad = 0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
      Database db = gen_random(seed, q, 6, 5);
      Database tagged = gen_var_tagged(q, 2, db);  // pivot Q3: no incoming maps
      auto whole = brute_force_eval(q, tagged);
      std::set<std::vector<ValId>> stripped;
      for (const auto& t : whole) {
        std::vector<ValId> row;
        for (ValId v : t)
          row.push_back(db.dict.find(untag_value(tagged.dict.str(v))));
        stripped.insert(row);
      }
      if (stripped != brute_force_eval_cq(q, 2, db)) ++bad;
    }
    if (bad) pass = false;
    detail += " var-tagged " + std::to_string(100 - bad) + "/100;";
  }

  // (c) triangle gadget: answer-plus-edge-probe versus brute-force 4-clique
  {
    UCQ q = qfile("acyclic_4clique.ucq");
    auto probe = [&](const std::vector<std::pair<int, int>>& edges) {
      Database db = gen_triangle_list(edges, q);
      std::set<std::pair<int, int>> es;
      for (auto [u, v] : edges) es.emplace(std::min(u, v), std::max(u, v));
      for (int d = 0; d < 2; ++d) {
        const CQ& cq = q.disjuncts[d];
        VarId xv = -1, yv = -1;
        for (int v = 0; v < cq.var_count(); ++v) {
          if (cq.var_names[v] == "x") xv = v;
          if (cq.var_names[v] == "y") yv = v;
        }
        for (const auto& t : brute_force_project(q, d, db, {xv, yv})) {
          int x = std::stoi(db.dict.str(t[0])),
              y = std::stoi(db.dict.str(t[1]));
          if (x != y && es.count({std::min(x, y), std::max(x, y)})) return true;
        }
      }
      return false;
    };
    int bad = 0, total = 0;
    auto k4 = complete_graph(4);
    ++total;
    if (probe(k4) != has_four_clique(4, k4)) ++bad;
    auto k4e = complete_graph(4);
    k4e.erase(std::remove(k4e.begin(), k4e.end(), std::pair<int, int>{1, 2}),
              k4e.end());
    ++total;
    if (probe(k4e) != has_four_clique(4, k4e)) ++bad;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      int n = 6 + static_cast<int>(seed % 10);
      auto g = random_graph(seed, n, 0.45);
      ++total;
      if (probe(g) != has_four_clique(n, g)) ++bad;
    }
    if (bad) pass = false;
    detail += " triangle-list " + std::to_string(total - bad) + "/" +
              std::to_string(total);
  }

  double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  report(5, "reduction validity", pass, detail, secs);
}

// ---- criterion 6: the virtual-relation pipeline ------------------------------

void criterion6() {
  auto t0 = Clock::now();
  long long checks = 0, bad = 0;
  for (const char* f : {"intro.ucq", "yellow.ucq"}) {
    Verdict v = classify(qfile(f));
    const UCQ& q = v.query;
    const Certificate& cert = *v.certificate;
    // instantiation order
    std::vector<std::pair<int, int>> order;
    for (size_t i = 0; i < cert.extensions.size(); ++i)
      for (size_t a = 0; a < cert.extensions[i].atoms.size(); ++a)
        order.emplace_back(static_cast<int>(i), static_cast<int>(a));
    std::sort(order.begin(), order.end(), [&](auto l, auto r) {
      return cert.extensions[l.first].atoms[l.second].depth <
             cert.extensions[r.first].atoms[r.second].depth;
    });
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
      Database db = gen_random(seed, q, 8, 6);
      StepCounter sc;
      VirtualRels virt(q.disjuncts.size());
      for (size_t i = 0; i < q.disjuncts.size(); ++i)
        virt[i].resize(cert.extensions[i].atoms.size());
      std::vector<std::vector<std::vector<ValId>>> raw(
          q.disjuncts.size() * 4);  // raw relations per (cq, atom)
      for (auto [i, a] : order) {
        auto vi = instantiate_virtual(q, cert, i, a, db, virt, sc);
        // M is a subset of the provider's answers
        const auto& atom = cert.extensions[i].atoms[a];
        auto provider_answers =
            brute_force_eval_cq(q, atom.witness.provider, db);
        for (const auto& m : vi.provider_answers)
          if (!provider_answers.count(m)) ++bad;
        virt[i][a] = vi.relation;
      }
      // consumer-side reduction realizes consumer(I)|V1 exactly
      for (size_t i = 0; i < q.disjuncts.size(); ++i) {
        if (cert.extensions[i].atoms.empty()) continue;
        const CQ& cq = q.disjuncts[i];
        auto tree = free_connex_tree(
            hypergraph_of(cq, cert.extensions[i].as_atoms()), cq.free_set());
        BoundTree bt =
            bind_tree(q, static_cast<int>(i), cert.extensions[i].atoms, *tree,
                      db, virt, sc);
        yannakakis_reduce(bt, sc);
        for (size_t a = 0; a < cert.extensions[i].atoms.size(); ++a) {
          const auto& atom = cert.extensions[i].atoms[a];
          int cover = static_cast<int>(cq.body.size() + a);
          for (size_t node = 0; node < bt.tree.nodes.size(); ++node) {
            if (bt.tree.cover_atom[node] != cover) continue;
            if (bt.tree.nodes[node] != Atom{atom.rel, atom.args}.var_set())
              continue;
            std::set<std::vector<ValId>> got(bt.rels[node].rows.begin(),
                                             bt.rels[node].rows.end());
            auto expect =
                brute_force_project(q, static_cast<int>(i), db,
                                    bt.rels[node].vars);
            ++checks;
            if (got != expect) ++bad;
            break;
          }
        }
      }
    }
  }
  double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  report(6, "virtual-relation pipeline equality on 100 random instances",
         bad == 0 && checks >= 400,
         std::to_string(checks) + " relation checks, " + std::to_string(bad) +
             " mismatches",
         secs);
}

// ---- criterion 7: the stream regularizer -------------------------------------

void criterion7() {
  auto t0 = Clock::now();
  std::mt19937_64 rng(2024);
  long long runs = 0, bad = 0;
  for (int round = 0; round < 300; ++round) {
    const std::uint64_t n = 5, m = 4, p = 60, d = 4;
    std::vector<std::vector<ValId>> payload;
    const int uniques = 1 + static_cast<int>(rng() % 20);
    for (int u = 0; u < uniques; ++u) {
      int copies = 1 + static_cast<int>(rng() % m);
      for (int c = 0; c < copies; ++c) payload.push_back({u});
    }
    std::shuffle(payload.begin(), payload.end(), rng);
    std::vector<std::pair<std::vector<ValId>, std::uint64_t>> raw;
    int spikes_left = static_cast<int>(n);
    for (auto& v : payload) {
      bool spike = spikes_left > 0 && rng() % 5 == 0;
      if (spike) --spikes_left;
      raw.emplace_back(v, spike ? 1 + rng() % p : 1 + rng() % d);
    }
    ++runs;
    try {
      auto out = cheater_wrapper(raw, n, m, p, d);
      std::set<std::vector<ValId>> got(out.begin(), out.end());
      std::set<std::vector<ValId>> expect(payload.begin(), payload.end());
      if (got != expect || out.size() != expect.size()) ++bad;
    } catch (const EngineError&) {
      ++bad;  // the queue-nonempty assertion must not fire within bounds
    }
  }
  double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  report(7, "stream regularizer on adversarial bounded streams", bad == 0,
         std::to_string(runs - bad) + "/" + std::to_string(runs), secs);
}

}  // namespace

int main() {
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  if (failures) {
    std::printf("%d criterion(s) failed\n", failures);
    return 1;
  }
  std::printf("all acceptance criteria passed\n");
  return 0;
}
