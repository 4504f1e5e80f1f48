#include <benchmark/benchmark.h>

#include "generators.hpp"
#include "oak/encoding.hpp"
#include "oak/matching.hpp"

namespace {

struct Pair {
  oak::gen::Instance inst;
  oak::gen::Renamed renamed;
  oak::PlanningEncodingGraph a, b;
};

Pair make_pair(std::size_t blocks) {
  oak::gen::Rng rng(blocks);
  Pair p{oak::gen::random_blocks(rng, blocks), {}, {}, {}};
  p.renamed = oak::gen::rename_objects(rng, p.inst);
  p.a = oak::encode_problem(p.inst.problem);
  p.b = oak::encode_problem(p.renamed.instance.problem);
  return p;
}

void BM_EncodeProblem(benchmark::State& state) {
  Pair p = make_pair(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(oak::encode_problem(p.inst.problem));
}
BENCHMARK(BM_EncodeProblem)->Arg(4)->Arg(16)->Arg(64);

void BM_DsSimilarity(benchmark::State& state) {
  Pair p = make_pair(static_cast<std::size_t>(state.range(0)));
  auto sa = oak::degree_signature(p.a), sb = oak::degree_signature(p.b);
  for (auto _ : state) benchmark::DoNotOptimize(oak::ds_similarity(sa, sb));
}
BENCHMARK(BM_DsSimilarity)->Arg(4)->Arg(16)->Arg(64);

void BM_KernelBase(benchmark::State& state) {
  Pair p = make_pair(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(oak::kernel_base(p.a, p.b));
}
BENCHMARK(BM_KernelBase)->Arg(4)->Arg(16)->Arg(64);

void BM_KernelNeighborhood(benchmark::State& state) {
  Pair p = make_pair(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(oak::kernel_neighborhood(p.a, p.b));
}
BENCHMARK(BM_KernelNeighborhood)->Arg(4)->Arg(16)->Arg(64);

void BM_ExactMatch(benchmark::State& state) {
  Pair p = make_pair(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(oak::exact_match(p.inst.problem, p.renamed.instance.problem));
}
BENCHMARK(BM_ExactMatch)->Arg(5)->Arg(7);

}  // namespace
