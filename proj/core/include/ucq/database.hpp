#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "ucq/query.hpp"

namespace ucq {

using ValId = int;

struct TupleHash {
  size_t operator()(const std::vector<ValId>& t) const {
    size_t h = 0xcbf29ce484222325ull;
    for (ValId v : t) h = (h ^ static_cast<size_t>(v)) * 0x100000001b3ull;
    return h;
  }
};

using TupleSet = std::unordered_set<std::vector<ValId>, TupleHash>;

// String interning; equality on domain values is id comparison.
struct SymbolTable {
  std::vector<std::string> strings;
  std::unordered_map<std::string, ValId> ids;

  ValId intern(const std::string& s);
  const std::string& str(ValId v) const { return strings[v]; }
  ValId find(const std::string& s) const;  // -1 if absent
};

struct Relation {
  std::string name;
  int arity = 0;
  std::vector<std::vector<ValId>> tuples;  // deduplicated, insertion order
  TupleSet tuple_set;

  bool insert(std::vector<ValId> t);  // false if duplicate
};

// Lookup table from a key tuple (values at key positions) to tuple indices.
struct Index {
  std::vector<int> key_positions;
  std::unordered_map<std::vector<ValId>, std::vector<int>, TupleHash> buckets;
};

struct Database {
  SymbolTable dict;
  std::vector<Relation> relations;
  std::unordered_map<std::string, int> rel_index;

  int add_relation(const std::string& name, int arity);
  int find_relation(const std::string& name) const;  // -1 if absent
  Index build_index(int rel, const std::vector<int>& key_positions) const;

  std::uint64_t total_tuples() const;
};

struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Manifest: JSON {"relations":[{"name":..,"arity":..,"file":..}]} with CSV
// files relative to the manifest. Rows are headerless, fields are UTF-8
// strings, duplicate rows collapse.
Database load_database(const std::string& manifest_path);

void save_database(const Database& db, const std::string& out_dir);

}  // namespace ucq
