#include <benchmark/benchmark.h>

#include "generators.hpp"
#include "oak/merge.hpp"
#include "oak/retrieval.hpp"

namespace {

oak::CaseBase random_library(std::size_t cases) {
  oak::gen::Rng rng(cases);
  oak::CaseBase base;
  for (std::size_t i = 0; i < cases; ++i) {
    auto inst = oak::gen::random_blocks(rng, 3 + i % 6);
    base.add(inst.problem, inst.plan);
  }
  return base;
}

void BM_Retrieve(benchmark::State& state) {
  oak::CaseBase base = random_library(static_cast<std::size_t>(state.range(0)));
  oak::gen::Rng rng(99);
  auto query = oak::gen::random_blocks(rng, 6);
  for (auto _ : state) benchmark::DoNotOptimize(oak::retrieve(base, query.problem));
}
BENCHMARK(BM_Retrieve)->Arg(10)->Arg(100)->Arg(500)->Unit(benchmark::kMillisecond);

void BM_MergeTowers(benchmark::State& state) {
  oak::CaseBase base;
  auto tower = oak::gen::tower_reversal("lib");
  oak::update_library(base, tower.problem, tower.plan);
  std::vector<oak::gen::Instance> parts;
  for (int i = 0; i < state.range(0); ++i) parts.push_back(oak::gen::tower_reversal(""));
  auto combined = oak::gen::disjoint_union(parts);
  for (auto _ : state) benchmark::DoNotOptimize(oak::merge_subplans(base, combined.problem));
}
BENCHMARK(BM_MergeTowers)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace
