#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "ucq/morphism.hpp"

using namespace ucq;
using namespace ucq::testing;

namespace {
const char* kIntro =
    "Q1(x,y,w) <- R1(x,z),R2(z,y),R3(y,w). Q2(x,y,w) <- R1(x,y),R2(y,w).";
const char* kIntractables =
    "Q1(x,y) <- R1(x,y),R2(y,u),R3(x,u). "
    "Q2(x,y) <- R1(y,v),R2(v,x),R3(y,x). "
    "Q3(x,y) <- R1(x,z),R2(y,z).";
}  // namespace

TEST_CASE("body_homs: the intro homomorphism h((x,y,w)) = (x,z,y)") {
  UCQ q = qparse(kIntro);
  auto homs = body_homs(q, 1, 0);  // Q2 -> Q1
  REQUIRE(!homs.empty());
  const CQ& q1 = q.disjuncts[0];
  const CQ& q2 = q.disjuncts[1];
  bool found = false;
  for (const auto& h : homs) {
    if (q1.var_names[h.map[vid(q2, "x")]] == "x" &&
        q1.var_names[h.map[vid(q2, "y")]] == "z" &&
        q1.var_names[h.map[vid(q2, "w")]] == "y")
      found = true;
    CHECK(check_body_hom(q2.body, q1.body, h.map));
  }
  CHECK(found);
}

TEST_CASE("body_homs: identity is always present") {
  UCQ q = qparse("Q(x,y) <- R(x,y),S(y,x).");
  auto homs = body_homs(q, 0, 0);
  bool ident = false;
  for (const auto& h : homs) {
    bool id = true;
    for (size_t v = 0; v < h.map.size(); ++v)
      if (h.map[v] != static_cast<VarId>(v)) id = false;
    ident |= id;
  }
  CHECK(ident);
}

TEST_CASE("body_homs: a relation absent from the target kills all maps") {
  UCQ q = qparse(
      "Q1(x,y,w) <- R1(x,z),R2(z,y),R3(y,w). "
      "Q2(x,y,w) <- R1(x,y),R2(y,w),R4(y).");
  CHECK(body_homs(q, 1, 0).empty());
}

TEST_CASE("is_body_isomorphic: the two cyclic disjuncts") {
  UCQ q = qparse(kIntractables);
  CHECK(is_body_isomorphic(q, 0, 1).has_value());
  CHECK(!is_body_isomorphic(q, 0, 2).has_value());
  auto self = is_body_isomorphic(q, 0, 0);
  REQUIRE(self.has_value());
  CHECK(check_body_hom(q.disjuncts[0].body, q.disjuncts[0].body, self->map));
}

TEST_CASE("is_body_isomorphic rejects self-joins") {
  UCQ q = qparse("Q1(x) <- R(x,y),R(y,x). Q2(x) <- R(x,y),R(y,x).");
  CHECK_THROWS_AS(is_body_isomorphic(q, 0, 1), std::invalid_argument);
}

TEST_CASE("cq_contains: redundancy direction of the first example") {
  UCQ q = qparse(
      "Q1(x,y) <- R1(x,y),R2(y,z),R3(z,x). Q2(x,y) <- R1(x,y),R2(y,z).");
  CHECK(cq_contains(q, 0, 1));       // Q1 ⊆ Q2
  CHECK(cq_contains(q, 0, 0));       // reflexive
  CHECK(!cq_contains(q, 1, 0));
  CHECK(!containment_counterexample(q, 0, 1, 3).has_value());
}

TEST_CASE("cq_contains: intro disjuncts are incomparable") {
  UCQ q = qparse(kIntro);
  CHECK(!cq_contains(q, 0, 1));
  // the brute-force search over tiny databases finds a witness for that
  auto cex = containment_counterexample(q, 0, 1, 3);
  REQUIRE(cex.has_value());
  auto a0 = brute_force_eval_cq(q, 0, *cex);
  auto a1 = brute_force_eval_cq(q, 1, *cex);
  bool sub = true;
  for (const auto& t : a0)
    if (!a1.count(t)) sub = false;
  CHECK(!sub);
}

TEST_CASE("cq_contains is sound on random databases") {
  QueryShape shape;
  shape.max_disjuncts = 2;
  shape.max_atoms = 3;
  shape.max_vars = 4;
  for (std::uint64_t seed = 1; seed <= 80; ++seed) {
    UCQ q = gen_random_query(seed, shape);
    if (q.disjuncts.size() != 2) continue;
    if (cq_contains(q, 0, 1)) {
      for (std::uint64_t ds = 1; ds <= 8; ++ds) {
        Database db = gen_random(seed * 31 + ds, q, 3, 3);
        auto a0 = brute_force_eval_cq(q, 0, db);
        auto a1 = brute_force_eval_cq(q, 1, db);
        for (const auto& t : a0) CHECK(a1.count(t) == 1);
      }
    }
  }
}

TEST_CASE("provides: intro, yellow and the guarded pair") {
  UCQ intro = qparse(kIntro);
  auto w = provides(intro, 1, {}, 0, vset(intro.disjuncts[0], {"x", "z", "y"}));
  REQUIRE(w.has_value());
  CHECK(w->v2 == vset(intro.disjuncts[1], {"x", "y", "w"}));
  CHECK((w->s & ~intro.disjuncts[1].free_set()) == 0);
  CHECK(check_provides_witness(intro, *w, {}, 0));

  UCQ yellow = qparse(
      "Q1(x,y,v,u) <- R1(x,z1),R2(z1,z2),R3(z2,z3),R4(z3,y),R5(y,v,u). "
      "Q2(x,y,v,u) <- R1(x,y),R2(y,v),R3(v,z1),R4(z1,u),R5(u,t1,t2). "
      "Q3(x,y,v,u) <- R1(x,z1),R2(z1,y),R3(y,v),R4(v,u),R5(u,t1,t2).");
  auto wy =
      provides(yellow, 1, {}, 2, vset(yellow.disjuncts[2], {"x", "z1", "y"}));
  REQUIRE(wy.has_value());
  CHECK(check_provides_witness(yellow, *wy, {}, 2));

  UCQ pair = qparse(
      "Q1(w,y,x,z) <- R1(w,v),R2(v,y),R3(y,z),R4(z,x). "
      "Q2(x,y,w,v) <- R1(w,v),R2(v,y),R3(y,z),R4(z,x).");
  CHECK(provides(pair, 1, {}, 0, vset(pair.disjuncts[0], {"v", "w", "y"}))
            .has_value());
  CHECK(provides(pair, 0, {}, 1, vset(pair.disjuncts[1], {"x", "y", "z"}))
            .has_value());
}

TEST_CASE("provides: no witness without a body-homomorphism") {
  UCQ q = qparse(
      "Q1(x,y,w) <- R1(x,z),R2(z,y),R3(y,w). "
      "Q2(x,y,w) <- R1(x,y),R2(y,w),R4(y).");
  CHECK(!provides(q, 1, {}, 0, vset(q.disjuncts[0], {"x", "z", "y"})).has_value());
}

TEST_CASE("provided_sets carry valid witnesses") {
  UCQ q = qparse(kIntro);
  for (int provider = 0; provider < 2; ++provider)
    for (int consumer = 0; consumer < 2; ++consumer)
      for (const auto& w : provided_sets(q, provider, {}, consumer))
        CHECK(check_provides_witness(q, w, {}, consumer));
}

TEST_CASE("body-isomorphic disjuncts agree on emptiness") {
  UCQ q = qparse(kIntractables);
  REQUIRE(is_body_isomorphic(q, 0, 1).has_value());
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    Database db = gen_random(seed, q, 4, 4);
    CHECK(brute_force_eval_cq(q, 0, db).empty() ==
          brute_force_eval_cq(q, 1, db).empty());
  }
}
