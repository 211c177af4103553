#include "ucq/database.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace ucq {

namespace fs = std::filesystem;
using nlohmann::json;

ValId SymbolTable::intern(const std::string& s) {
  auto it = ids.find(s);
  if (it != ids.end()) return it->second;
  ValId id = static_cast<ValId>(strings.size());
  strings.push_back(s);
  ids.emplace(s, id);
  return id;
}

ValId SymbolTable::find(const std::string& s) const {
  auto it = ids.find(s);
  return it == ids.end() ? -1 : it->second;
}

bool Relation::insert(std::vector<ValId> t) {
  if (tuple_set.contains(t)) return false;
  tuple_set.insert(t);
  tuples.push_back(std::move(t));
  return true;
}

int Database::add_relation(const std::string& name, int arity) {
  auto it = rel_index.find(name);
  if (it != rel_index.end()) {
    if (relations[it->second].arity != arity)
      throw DataError("relation " + name + " redeclared with arity " +
                      std::to_string(arity));
    return it->second;
  }
  int id = static_cast<int>(relations.size());
  relations.push_back(Relation{name, arity, {}, {}});
  rel_index.emplace(name, id);
  return id;
}

int Database::find_relation(const std::string& name) const {
  auto it = rel_index.find(name);
  return it == rel_index.end() ? -1 : it->second;
}

Index Database::build_index(int rel, const std::vector<int>& key_positions) const {
  Index ix;
  ix.key_positions = key_positions;
  const Relation& r = relations[rel];
  for (size_t t = 0; t < r.tuples.size(); ++t) {
    std::vector<ValId> key;
    key.reserve(key_positions.size());
    for (int p : key_positions) key.push_back(r.tuples[t][p]);
    ix.buckets[key].push_back(static_cast<int>(t));
  }
  return ix;
}

std::uint64_t Database::total_tuples() const {
  std::uint64_t n = 0;
  for (const Relation& r : relations) n += r.tuples.size();
  return n;
}

Database load_database(const std::string& manifest_path) {
  std::ifstream in(manifest_path);
  if (!in) throw DataError("cannot open manifest " + manifest_path);
  json manifest;
  try {
    in >> manifest;
  } catch (const json::exception& e) {
    throw DataError("malformed manifest " + manifest_path + ": " + e.what());
  }
  if (!manifest.contains("relations") || !manifest["relations"].is_array())
    throw DataError("manifest " + manifest_path + " lacks a relations array");

  Database db;
  fs::path base = fs::path(manifest_path).parent_path();
  for (const auto& spec : manifest["relations"]) {
    std::string name = spec.at("name").get<std::string>();
    int arity = spec.at("arity").get<int>();
    int rid = db.add_relation(name, arity);
    fs::path file = base / spec.at("file").get<std::string>();
    std::ifstream rows(file);
    if (!rows) throw DataError("cannot open relation file " + file.string());
    std::string line;
    int lineno = 0;
    while (std::getline(rows, line)) {
      ++lineno;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      std::vector<ValId> tuple;
      size_t start = 0;
      while (true) {
        size_t comma = line.find(',', start);
        std::string field = (comma == std::string::npos)
                                ? line.substr(start)
                                : line.substr(start, comma - start);
        tuple.push_back(db.dict.intern(field));
        if (comma == std::string::npos) break;
        start = comma + 1;
      }
      if (static_cast<int>(tuple.size()) != arity)
        throw DataError(file.string() + ":" + std::to_string(lineno) +
                        ": row has " + std::to_string(tuple.size()) +
                        " fields, relation " + name + " has arity " +
                        std::to_string(arity));
      db.relations[rid].insert(std::move(tuple));
    }
  }
  return db;
}

void save_database(const Database& db, const std::string& out_dir) {
  fs::create_directories(out_dir);
  json manifest;
  manifest["relations"] = json::array();
  for (const Relation& r : db.relations) {
    std::string fname = r.name + ".csv";
    manifest["relations"].push_back(
        {{"name", r.name}, {"arity", r.arity}, {"file", fname}});
    std::ofstream out(fs::path(out_dir) / fname);
    for (const auto& t : r.tuples) {
      for (size_t i = 0; i < t.size(); ++i) {
        if (i) out << ',';
        out << db.dict.str(t[i]);
      }
      out << '\n';
    }
  }
  std::ofstream mf(fs::path(out_dir) / "manifest.json");
  mf << manifest.dump(2) << '\n';
}

}  // namespace ucq
