#include <benchmark/benchmark.h>

#include "generators.hpp"
#include "oak/relaxed.hpp"

namespace {

void BM_RelaxedPlan(benchmark::State& state) {
  oak::gen::Rng rng(1);
  auto inst = oak::gen::random_blocks(rng, static_cast<std::size_t>(state.range(0)));
  oak::Task task(inst.problem);
  for (auto _ : state) benchmark::DoNotOptimize(oak::relaxed_plan(task, task.goals(), task.init()));
}
BENCHMARK(BM_RelaxedPlan)->Arg(5)->Arg(10)->Arg(20);

// Half of a valid plan, so evaluation has flaws to repair.
void BM_EvaluatePlan(benchmark::State& state) {
  oak::gen::Rng rng(2);
  auto inst = oak::gen::random_blocks(rng, static_cast<std::size_t>(state.range(0)));
  oak::Task task(inst.problem);
  oak::Plan plan = inst.plan;
  plan.steps.resize(plan.steps.size() / 2);
  for (auto _ : state) benchmark::DoNotOptimize(oak::evaluate_plan(task, plan));
}
BENCHMARK(BM_EvaluatePlan)->Arg(5)->Arg(10)->Arg(20);

void BM_Grounding(benchmark::State& state) {
  oak::gen::Rng rng(3);
  oak::gen::LogisticsShape shape;
  shape.cities = static_cast<std::size_t>(state.range(0));
  auto inst = oak::gen::random_logistics(rng, shape);
  for (auto _ : state) benchmark::DoNotOptimize(oak::Task(inst.problem));
}
BENCHMARK(BM_Grounding)->Arg(2)->Arg(4)->Arg(8);

}  // namespace
