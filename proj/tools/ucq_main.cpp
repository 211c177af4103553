#include <chrono>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "ucq/classifier.hpp"
#include "ucq/engine.hpp"
#include "ucq/testkit.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// exit codes: 0 success, 1 check failure, 2 input error, 3 not tractable
constexpr int kOk = 0, kCheckFailed = 1, kInputError = 2, kNotTractable = 3;

ucq::UCQ read_query(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ucq::DataError("cannot open query file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return ucq::parse_ucq(buf.str());
}

std::string answer_json(const ucq::Database& db, const std::vector<ucq::ValId>& a) {
  json row = json::array();
  for (ucq::ValId v : a) row.push_back(db.dict.str(v));
  return row.dump();
}

int cmd_classify(const std::string& query_path) {
  ucq::UCQ q = read_query(query_path);
  ucq::Verdict v = ucq::classify(q);
  std::cout << ucq::verdict_to_json(v.query, v) << "\n";
  return kOk;
}

int cmd_enumerate(const std::string& query_path, const std::string& data_path,
                  const std::string& mode, long long limit, bool stats,
                  const std::string& out_path) {
  ucq::UCQ q = read_query(query_path);
  ucq::Verdict v = ucq::classify(q);
  if (v.kind != ucq::Tractability::Tractable) {
    std::cerr << ucq::verdict_to_json(v.query, v) << "\n";
    return kNotTractable;
  }
  ucq::Database db = ucq::load_database(data_path);
  ucq::EnumMode m =
      mode == "interleave" ? ucq::EnumMode::Interleave : ucq::EnumMode::General;
  ucq::UcqEnumerator en(v.query, *v.certificate, db, m);

  std::ofstream file;
  std::ostream* out = &std::cout;
  if (!out_path.empty()) {
    file.open(out_path);
    if (!file) throw ucq::DataError("cannot open output file " + out_path);
    out = &file;
  }
  long long count = 0;
  while (auto a = en.next()) {
    (*out) << answer_json(db, *a) << "\n";
    if (++count == limit) break;
  }
  if (stats) std::cerr << ucq::stats_to_json(en.stats()) << "\n";
  return kOk;
}

int cmd_check(const std::string& query_path, const std::string& data_path,
              bool corrupt) {
  ucq::UCQ q = read_query(query_path);
  ucq::Database db = ucq::load_database(data_path);
  auto expected = ucq::brute_force_eval(q, db);
  ucq::Verdict v = ucq::classify(q);
  if (v.kind != ucq::Tractability::Tractable) {
    std::cout << "verdict " << (v.kind == ucq::Tractability::Unknown
                                    ? "Unknown"
                                    : "Intractable")
              << "; oracle answers: " << expected.size() << "\n";
    return kOk;
  }
  ucq::UcqEnumerator en(v.query, *v.certificate, db, ucq::EnumMode::General,
                        corrupt);
  std::set<std::vector<ucq::ValId>> got;
  bool dup = false;
  std::vector<std::string> diffs;
  while (auto a = en.next()) {
    if (!got.insert(*a).second) {
      dup = true;
      if (diffs.size() < 10) diffs.push_back("duplicate " + answer_json(db, *a));
    }
  }
  for (const auto& a : expected)
    if (!got.count(a) && diffs.size() < 10)
      diffs.push_back("missing " + answer_json(db, a));
  for (const auto& a : got)
    if (!expected.count(a) && diffs.size() < 10)
      diffs.push_back("unexpected " + answer_json(db, a));
  if (!dup && got == expected) {
    std::cout << "ok: " << got.size() << " answers match the oracle\n";
    return kOk;
  }
  std::cout << "mismatch: engine " << got.size() << " answers, oracle "
            << expected.size() << "\n";
  for (const auto& d : diffs) std::cout << "  " << d << "\n";
  return kCheckFailed;
}

int cmd_gadget(const std::string& kind, int size, std::uint64_t seed,
               const std::string& query_path, const std::string& out_dir,
               int disjunct, int path_index, int split) {
  ucq::UCQ q = read_query(query_path);
  ucq::Database db;
  if (kind == "matmul") {
    std::mt19937_64 rng(seed);
    ucq::BoolMatrix a, b;
    for (int r = 1; r <= size; ++r)
      for (int c = 1; c <= size; ++c) {
        if (rng() % 2) a.emplace_back(r, c);
        if (rng() % 2) b.emplace_back(r, c);
      }
    int d = disjunct;
    if (d < 0)
      for (size_t i = 0; i < q.disjuncts.size() && d < 0; ++i)
        if (!ucq::free_paths(q, static_cast<int>(i)).empty())
          d = static_cast<int>(i);
    if (d < 0) throw ucq::DataError("matmul gadget: no disjunct has a free-path");
    auto paths = ucq::free_paths(q, d);
    if (path_index >= static_cast<int>(paths.size()))
      throw ucq::DataError("matmul gadget: path index out of range");
    db = ucq::gen_matmul(a, b, q, d, paths[path_index].vars, split);
  } else if (kind == "triangle-list") {
    db = ucq::gen_triangle_list(ucq::random_graph(seed, size, 0.5), q);
  } else if (kind == "triangle-encode") {
    db = ucq::gen_triangle_encode(ucq::random_graph(seed, size, 0.5), q,
                                  std::max(disjunct, 0));
  } else if (kind == "var-tagged") {
    ucq::Database base = ucq::gen_random(seed, q, size, size);
    db = ucq::gen_var_tagged(q, std::max(disjunct, 0), base);
  } else if (kind == "random") {
    db = ucq::gen_random(seed, q, size, size);
  } else {
    throw ucq::DataError("unknown gadget kind " + kind);
  }
  ucq::save_database(db, out_dir);
  std::cout << "wrote " << db.relations.size() << " relations to " << out_dir
            << "\n";
  return kOk;
}

struct BenchRow {
  int n;
  std::uint64_t pre = 0, max_delay = 0, answers = 0;
  double engine_ms = 0, brute_ms = 0;
};

int cmd_bench(const std::string& query_path, const std::string& sizes_csv,
              std::uint64_t seed, bool compare_brute,
              const std::string& out_path) {
  ucq::UCQ q = read_query(query_path);
  ucq::Verdict v = ucq::classify(q);
  if (v.kind != ucq::Tractability::Tractable) {
    std::cerr << ucq::verdict_to_json(q, v) << "\n";
    return kNotTractable;
  }
  std::vector<int> sizes;
  std::stringstream ss(sizes_csv);
  for (std::string tok; std::getline(ss, tok, ',');) sizes.push_back(std::stoi(tok));

  auto run = [&](int n) {
    BenchRow row;
    row.n = n;
    // halve the value domain until the stream is long enough to measure
    ucq::Database db;
    for (int domain = n; domain >= 2; domain /= 2) {
      db = ucq::gen_random(seed, q, n, domain);
      auto t0 = std::chrono::steady_clock::now();
      ucq::UcqEnumerator en(v.query, *v.certificate, db, ucq::EnumMode::General);
      while (en.next()) {
      }
      auto t1 = std::chrono::steady_clock::now();
      row.engine_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
      row.pre = en.stats().pre;
      row.max_delay = en.stats().max_delay;
      row.answers = en.stats().answers;
      if (row.answers >= 32) break;
    }
    if (compare_brute) {
      auto b0 = std::chrono::steady_clock::now();
      auto res = ucq::brute_force_eval(q, db);
      auto b1 = std::chrono::steady_clock::now();
      row.brute_ms = std::chrono::duration<double, std::milli>(b1 - b0).count();
      (void)res;
    }
    return row;
  };

  std::vector<std::future<BenchRow>> futures;
  for (int n : sizes)
    futures.push_back(std::async(std::launch::async, run, n));
  std::vector<BenchRow> rows;
  for (auto& f : futures) rows.push_back(f.get());
  std::sort(rows.begin(), rows.end(),
            [](const BenchRow& a, const BenchRow& b) { return a.n < b.n; });

  std::ofstream file;
  std::ostream* out = &std::cout;
  if (!out_path.empty()) {
    file.open(out_path);
    out = &file;
  }
  (*out) << "n,preprocessing_steps,max_delay_steps,answers,engine_ms";
  if (compare_brute) (*out) << ",brute_ms";
  (*out) << "\n";
  for (const BenchRow& r : rows) {
    (*out) << r.n << "," << r.pre << "," << r.max_delay << "," << r.answers
           << "," << r.engine_ms;
    if (compare_brute) (*out) << "," << r.brute_ms;
    (*out) << "\n";
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Structural classification and constant-delay enumeration for "
               "unions of conjunctive queries"};
  app.require_subcommand(1);

  std::string query_path, data_path, out_path, mode = "general";
  std::string gadget_kind, sizes = "100,1000,10000";
  long long limit = -1;
  int size = 3, disjunct = -1, path_index = 0, split = 1;
  std::uint64_t seed = 1;
  bool stats = false, corrupt = false, compare_brute = false;

  auto* classify = app.add_subcommand("classify", "classify a UCQ with a certificate");
  classify->add_option("query", query_path)->required();

  auto* enumerate = app.add_subcommand("enumerate", "stream answers as NDJSON");
  enumerate->add_option("query", query_path)->required();
  enumerate->add_option("--data", data_path, "database manifest")->required();
  enumerate->add_option("--mode", mode)->check(CLI::IsMember({"general", "interleave"}));
  enumerate->add_option("--limit", limit);
  enumerate->add_flag("--stats", stats);
  enumerate->add_option("--out", out_path);

  auto* check = app.add_subcommand("check", "diff the engine against the oracle");
  check->add_option("query", query_path)->required();
  check->add_option("--data", data_path)->required();
  check->add_flag("--corrupt-index", corrupt)->group("");  // test hook

  auto* gadget = app.add_subcommand("gadget", "write a reduction instance");
  gadget->add_option("query", query_path)->required();
  gadget->add_option("--kind", gadget_kind)
      ->required()
      ->check(CLI::IsMember({"matmul", "triangle-list", "triangle-encode",
                             "var-tagged", "random"}));
  gadget->add_option("--size", size);
  gadget->add_option("--seed", seed);
  gadget->add_option("--out", out_path)->required();
  gadget->add_option("--disjunct", disjunct);
  gadget->add_option("--path-index", path_index);
  gadget->add_option("--split", split);

  auto* bench = app.add_subcommand("bench", "delay metrics over scaled instances");
  bench->add_option("query", query_path)->required();
  bench->add_option("--sizes", sizes);
  bench->add_option("--seed", seed);
  bench->add_flag("--compare-brute", compare_brute);
  bench->add_option("--out", out_path);

  CLI11_PARSE(app, argc, argv);

  try {
    if (classify->parsed()) return cmd_classify(query_path);
    if (enumerate->parsed())
      return cmd_enumerate(query_path, data_path, mode, limit, stats, out_path);
    if (check->parsed()) return cmd_check(query_path, data_path, corrupt);
    if (gadget->parsed())
      return cmd_gadget(gadget_kind, size, seed, query_path, out_path, disjunct,
                        path_index, split);
    if (bench->parsed())
      return cmd_bench(query_path, sizes, seed, compare_brute, out_path);
  } catch (const ucq::ParseError& e) {
    std::cerr << e.what() << "\n";
    return kInputError;
  } catch (const ucq::DataError& e) {
    std::cerr << e.what() << "\n";
    return kInputError;
  } catch (const std::invalid_argument& e) {
    std::cerr << e.what() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }
  return kOk;
}
