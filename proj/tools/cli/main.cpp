#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"

int main(int argc, char** argv) {
  using namespace oak::cli;
  CLI::App app{"oak: case-based planning with a persistent plan library"};
  app.require_subcommand(1);

  SolveOptions solve;
  auto* s = app.add_subcommand("solve", "Retrieve (or merge) a plan for a problem, repair and validate it");
  s->add_option("domain", solve.domain, "Domain PDDL file")->required();
  s->add_option("problem", solve.problem, "Problem PDDL file")->required();
  s->add_option("--library", solve.library, "Plan library directory");
  s->add_flag("--merge", solve.merge, "Merge library subplans after retrieval");
  s->add_option("--alpha-g", solve.retrieval.alpha_g, "Weight of planning from scratch")
      ->check(CLI::PositiveNumber);
  s->add_option("--limit", solve.retrieval.limit, "Similarity window per funnel stage")->check(CLI::Range(0.0, 1.0));
  s->add_option("--screen-cap", solve.retrieval.screen_cap, "Cases kept by the degree-sequence screen")
      ->check(CLI::Range(std::size_t{1}, SIZE_MAX));
  s->add_option("--gamma", solve.retrieval.gamma, "Neighbourhood kernel weight")->check(CLI::NonNegativeNumber);
  s->add_flag("--exact", solve.retrieval.exact, "Exhaustive matching for small cases");
  s->add_flag("--json", solve.json, "Print one JSON document");
  s->add_flag("--timings", solve.timings, "Report wall time per stage");
  s->add_flag("--record-usage", solve.record_usage, "Update the source case's usage counters");

  AddCaseOptions add;
  auto* a = app.add_subcommand("add-case", "Insert a solved problem into a library");
  a->add_option("domain", add.domain, "Domain PDDL file")->required();
  a->add_option("problem", add.problem, "Problem PDDL file")->required();
  a->add_option("plan", add.plan, "Plan file, one (action args) per line")->required();
  a->add_option("--library", add.library, "Plan library directory")->required();
  a->add_flag("--decompose", add.decompose, "Also store goal subplans");
  a->add_option("--gamma", add.gamma, "Neighbourhood kernel weight")->check(CLI::NonNegativeNumber);
  a->add_flag("--json", add.json, "Print one JSON document");

  MatchOptions match;
  auto* m = app.add_subcommand("match", "Match the objects of a case problem to a problem");
  m->add_option("domain", match.domain, "Domain PDDL file")->required();
  m->add_option("case-problem", match.case_problem, "Problem playing the stored case")->required();
  m->add_option("problem", match.problem, "Problem to match against")->required();
  m->add_flag("--exact", match.exact, "Add the exhaustive optimum (small problems only)");
  m->add_option("--gamma", match.gamma, "Neighbourhood kernel weight")->check(CLI::NonNegativeNumber);
  m->add_flag("--json", match.json, "Print one JSON document");

  StatsOptions stats;
  auto* st = app.add_subcommand("stats", "Summarise a plan library");
  st->add_option("--library", stats.library, "Plan library directory")->required();
  st->add_flag("--json", stats.json, "Print one JSON document");

  GenerateOptions generate;
  auto* g = app.add_subcommand("generate", "Write a random toy instance with a solution plan");
  g->add_option("kind", generate.kind, "blocks, logistics or tower")->required();
  g->add_option("--seed", generate.seed, "Random seed");
  g->add_option("--size", generate.size, "Blocks, packages or towers");
  g->add_option("--out", generate.out_dir, "Directory for domain.pddl, problem.pddl and plan.txt");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  if (s->parsed()) return cmd_solve(solve, std::cout, std::cerr);
  if (a->parsed()) return cmd_add_case(add, std::cout, std::cerr);
  if (m->parsed()) return cmd_match(match, std::cout, std::cerr);
  if (st->parsed()) return cmd_stats(stats, std::cout, std::cerr);
  return cmd_generate(generate, std::cout, std::cerr);
}
