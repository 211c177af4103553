#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "ucq/database.hpp"
#include "ucq/query.hpp"

namespace ucq {

// Naive backtracking evaluation; ground truth for every differential test.
// Exponential in query size, polynomial in data.
std::set<std::vector<ValId>> brute_force_eval(const UCQ& q, const Database& db);
std::set<std::vector<ValId>> brute_force_eval_cq(const UCQ& q, int disjunct,
                                                 const Database& db);
// All satisfying assignments of one disjunct's body projected to `proj`.
std::set<std::vector<ValId>> brute_force_project(const UCQ& q, int disjunct,
                                                 const Database& db,
                                                 const std::vector<VarId>& proj);

// Composite values: tagging concatenates the variable name, untagging strips
// it. Used by the variable-tagged instance transformations.
std::string tag_value(const std::string& value, const std::string& var);
std::string untag_value(const std::string& value);

// σ of the exact-reduction pair: every value in a pivot relation becomes
// (value, variable) per position; relations absent from the pivot end up
// empty. τ on answers is untag_value per field.
Database gen_var_tagged(const UCQ& q, int pivot, const Database& db);

// Boolean matrices as lists of 1-positions (row, col), 1-based.
using BoolMatrix = std::vector<std::pair<int, int>>;

// Encodes A·B onto a free-path of the target disjunct: the path prefix up to
// the split carries A-rows, the suffix carries B-rows, every other position
// the dummy constant. Endpoint projection of the disjunct's answers equals
// the boolean product.
Database gen_matmul(const BoolMatrix& a, const BoolMatrix& b, const UCQ& q,
                    int disjunct, const std::vector<VarId>& path, int split);

// Every relation of the query receives the sorted triangle list of the graph.
// All relations must be ternary.
Database gen_triangle_list(const std::vector<std::pair<int, int>>& edges,
                           const UCQ& q);

// Variable-tagged triangle encoding over a 3-cycle of binary atoms
// R(a,b), S(b,c), T(a,c) in the pivot disjunct.
Database gen_triangle_encode(const std::vector<std::pair<int, int>>& edges,
                             const UCQ& q, int pivot);

// Reproducible pseudo-random instances over the query's schema.
Database gen_random(std::uint64_t seed, const UCQ& q, int tuples_per_relation,
                    int domain);

struct QueryShape {
  int max_disjuncts = 2;
  int max_atoms = 5;
  int max_vars = 6;
  int max_arity = 3;
};

UCQ gen_random_query(std::uint64_t seed, const QueryShape& shape);

// Brute-force 4-clique test, the independent oracle for the triangle gadget.
bool has_four_clique(int n, const std::vector<std::pair<int, int>>& edges);

std::vector<std::pair<int, int>> complete_graph(int n);
std::vector<std::pair<int, int>> random_graph(std::uint64_t seed, int n,
                                              double density);

}  // namespace ucq
