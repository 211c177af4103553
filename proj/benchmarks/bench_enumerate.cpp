#include <benchmark/benchmark.h>

#include "ucq/classifier.hpp"
#include "ucq/engine.hpp"
#include "ucq/testkit.hpp"

namespace {

const char* kIntro =
    "Q1(x,y,w) <- R1(x,z),R2(z,y),R3(y,w). Q2(x,y,w) <- R1(x,y),R2(y,w).";

void BM_Classify(benchmark::State& state) {
  ucq::UCQ q = ucq::parse_ucq(kIntro);
  for (auto _ : state) benchmark::DoNotOptimize(ucq::classify(q));
}
BENCHMARK(BM_Classify);

void BM_YannakakisReduce(benchmark::State& state) {
  ucq::UCQ q = ucq::parse_ucq("Q(x,z,y) <- R(x,z),S(z,y).");
  ucq::Database db = ucq::gen_random(3, q, state.range(0), state.range(0));
  auto tree = ucq::is_free_connex(q, 0);
  for (auto _ : state) {
    ucq::StepCounter sc;
    ucq::BoundTree bt = ucq::bind_tree(q, 0, {}, *tree, db, {}, sc);
    ucq::yannakakis_reduce(bt, sc);
    benchmark::DoNotOptimize(bt.empty);
  }
  state.SetItemsProcessed(state.iterations() * 2 * state.range(0));
}
BENCHMARK(BM_YannakakisReduce)->Arg(1000)->Arg(10000)->Arg(100000);

void BM_EnumerateUnion(benchmark::State& state) {
  ucq::UCQ q = ucq::parse_ucq(kIntro);
  ucq::Verdict v = ucq::classify(q);
  ucq::Database db = ucq::gen_random(7, v.query, state.range(0), state.range(0));
  std::uint64_t answers = 0;
  for (auto _ : state) {
    ucq::UcqEnumerator en(v.query, *v.certificate, db, ucq::EnumMode::General);
    answers = 0;
    while (en.next()) ++answers;
    benchmark::DoNotOptimize(answers);
  }
  state.SetItemsProcessed(state.iterations() * answers);
}
BENCHMARK(BM_EnumerateUnion)->Arg(100)->Arg(1000)->Arg(10000);

void BM_BruteForceUnion(benchmark::State& state) {
  ucq::UCQ q = ucq::parse_ucq(kIntro);
  ucq::Database db = ucq::gen_random(7, q, state.range(0), state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(ucq::brute_force_eval(q, db));
}
BENCHMARK(BM_BruteForceUnion)->Arg(100)->Arg(400);

}  // namespace

BENCHMARK_MAIN();
