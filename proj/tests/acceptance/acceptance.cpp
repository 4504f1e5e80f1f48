// Property-based acceptance suite. Prints one PASS/FAIL line per criterion
// and exits non-zero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "commands.hpp"
#include "fixtures.hpp"
#include "generators.hpp"
#include "oak/case_base.hpp"
#include "oak/encoding.hpp"
#include "oak/matching.hpp"
#include "oak/merge.hpp"
#include "oak/retrieval.hpp"
#include "oracles.hpp"

using namespace oak;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

// Pinned tolerances.
constexpr double kEncodeBudgetMs = 10.0;
constexpr std::size_t kRenamingPairs = 200;
constexpr double kRenamingBudgetS = 30.0;
constexpr double kBaseRecoveryRate = 0.95;
constexpr std::size_t kDominancePairs = 500;
constexpr std::size_t kMcesPairs = 300;
constexpr std::size_t kMcesMaxVertices = 6;
constexpr std::size_t kEvaluatePairs = 1000;
constexpr std::size_t kLibrarySize = 100;
constexpr std::size_t kMergeInstances = 50;
constexpr double kMergeSuccessRate = 0.90;
constexpr std::size_t kDeliverySolutions = 200;
constexpr double kEps = 1e-9;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

struct Verdict {
  bool pass;
  std::string detail;
};

double completed_simil(const Problem& c, const Problem& p, const ObjectMapping& partial) {
  auto mu = complete_mapping(c, p, partial);
  return mu ? simil(c, p, *mu).value : -1.0;
}

gen::Instance small_logistics(gen::Rng& rng) {
  gen::LogisticsShape shape;
  shape.cities = 2;
  shape.locations_per_city = 0;
  shape.airplanes = 1;
  shape.packages = 1 + rng() % 2;
  return gen::random_logistics(rng, shape);
}

// 1 ------------------------------------------------------------------------

Verdict sussman_encoding() {
  test::Sussman s;
  auto t0 = Clock::now();
  PlanningEncodingGraph eg = encode_problem(s.problem);
  const double ms = ms_since(t0);
  auto concept_label = [&](const char* name) { return eg.graph.vertices.at({VertexRole::Concept, name}); };
  bool ok = eg.graph.vertices.size() == 7 && concept_label("a") == LabelMultiset{{"block", 3}} &&
            concept_label("b") == LabelMultiset{{"block", 4}} && concept_label("c") == LabelMultiset{{"block", 3}};
  for (const auto& [e, label] : eg.graph.edges)
    for (const auto& [l, c] : label.entries()) ok = ok && c == 1;
  char buf[128];
  std::snprintf(buf, sizeof buf, "7 vertices, labels 3/4/3, unit edges: %s; %.3f ms (< %.0f)", ok ? "yes" : "no", ms,
                kEncodeBudgetMs);
  return {ok && ms < kEncodeBudgetMs, buf};
}

// 2 ------------------------------------------------------------------------

Verdict renaming_recovery() {
  gen::Rng rng(2024);
  std::size_t base_ok = 0, selected_ok = 0, exact_ok = 0;
  auto t0 = Clock::now();
  for (std::size_t i = 0; i < kRenamingPairs; ++i) {
    gen::Instance inst = i % 2 == 0 ? gen::random_blocks(rng, 3 + rng() % 6) : small_logistics(rng);
    gen::Renamed r = gen::rename_objects(rng, inst);
    const Problem& c = inst.problem;
    const Problem& p = r.instance.problem;
    auto gc = encode_problem(c), gp = encode_problem(p);
    const double sb = completed_simil(c, p, kernel_base(gc, gp).mapping);
    const double sn = completed_simil(c, p, kernel_neighborhood(gc, gp).mapping);
    base_ok += sb >= 1.0 - kEps;
    selected_ok += std::max(sb, sn) >= 1.0 - kEps;
    exact_ok += exact_match(c, p).k >= 1.0 - kEps;
  }
  const double s = ms_since(t0) / 1000.0;
  const double rate = static_cast<double>(base_ok) / kRenamingPairs;
  char buf[200];
  std::snprintf(buf, sizeof buf, "base %zu/%zu (%.1f%% >= %.0f%%), N-or-base %zu/%zu, exact optimum 1 in %zu; %.2f s",
                base_ok, kRenamingPairs, 100 * rate, 100 * kBaseRecoveryRate, selected_ok, kRenamingPairs, exact_ok,
                s);
  return {rate >= kBaseRecoveryRate && selected_ok == kRenamingPairs && exact_ok == kRenamingPairs &&
              s < kRenamingBudgetS,
          buf};
}

// 3 ------------------------------------------------------------------------

Verdict oracle_dominance() {
  gen::Rng rng(3);
  std::size_t violations = 0, compared = 0;
  for (std::size_t i = 0; i < kDominancePairs; ++i) {
    gen::Instance a, b;
    if (i % 2 == 0) {
      const std::size_t n = 3 + rng() % 5;
      a = gen::random_blocks(rng, n - rng() % 2);
      b = gen::random_blocks(rng, n);
    } else {
      a = small_logistics(rng);
      b = gen::random_logistics(rng, {2, 0, 1, 2});
    }
    ExactMatch e = exact_match(a.problem, b.problem);
    if (!e.feasible) continue;
    auto ga = encode_problem(a.problem), gb = encode_problem(b.problem);
    std::vector<std::optional<ObjectMapping>> heuristics{
        complete_mapping(a.problem, b.problem, kernel_base(ga, gb).mapping),
        complete_mapping(a.problem, b.problem, kernel_neighborhood(ga, gb).mapping),
        anchored_mapping(a.problem, ga, b.problem, gb, {})};
    for (const auto& mu : heuristics) {
      if (!mu) continue;
      ++compared;
      violations += simil(a.problem, b.problem, *mu).value > e.k + kEps;
    }
  }
  return {violations == 0 && compared > 0,
          std::to_string(violations) + " violations over " + std::to_string(compared) + " heuristic mappings from " +
              std::to_string(kDominancePairs) + " pairs"};
}

// 4 ------------------------------------------------------------------------

LabeledGraph random_graph(gen::Rng& rng) {
  static const std::vector<std::string> preds{"p", "q", "r"};
  for (;;) {
    LabeledGraph g;
    const std::size_t facts = 1 + rng() % 4;
    for (std::size_t k = 0; k < facts; ++k) {
      const std::size_t arity = 1 + rng() % 3;
      Fact f{preds[rng() % preds.size()], {}};
      for (std::size_t a = 0; a < arity; ++a) f.args.push_back("o" + std::to_string(rng() % 3));
      g = graph_union(g, fact_encoding(f, rng() % 2 ? Side::Init : Side::Goal,
                                       std::vector<std::string>(arity, "t")));
    }
    if (g.vertices.size() <= kMcesMaxVertices) return g;
  }
}

Verdict ds_admissibility() {
  gen::Rng rng(4);
  std::size_t violations = 0;
  for (std::size_t i = 0; i < kMcesPairs; ++i) {
    LabeledGraph a = random_graph(rng), b = random_graph(rng);
    const double bound = ds_similarity(degree_signature(a), degree_signature(b)) *
                         static_cast<double>(std::max(a.edge_mass(), b.edge_mass()));
    violations += bound + kEps < static_cast<double>(oracle::mces_weight(a, b));
  }
  return {violations == 0, std::to_string(violations) + " violations over " + std::to_string(kMcesPairs) + " pairs"};
}

// 5 ------------------------------------------------------------------------

Plan mutate(gen::Rng& rng, const Task& task, Plan plan) {
  const std::size_t n = plan.steps.size();
  switch (rng() % 5) {
    case 0:
      if (n) plan.steps.erase(plan.steps.begin() + static_cast<std::ptrdiff_t>(rng() % n));
      break;
    case 1:
      if (n > 1) std::swap(plan.steps[rng() % n], plan.steps[rng() % n]);
      break;
    case 2: {
      const auto& acts = task.actions();
      plan.steps.insert(plan.steps.begin() + static_cast<std::ptrdiff_t>(rng() % (n + 1)),
                        acts[rng() % acts.size()].step);
      break;
    }
    case 3:
      plan.steps.resize(rng() % (n + 1));
      break;
    default:
      break;  // unchanged
  }
  return plan;
}

// An unreachable flaw has no finite repair: its cost is the infinite
// sentinel, so "repair size" is read as EvaluationResult::cost().
Verdict evaluate_validity() {
  gen::Rng rng(5);
  std::size_t violations = 0, valid = 0, unreachable = 0;
  for (std::size_t i = 0; i < kEvaluatePairs; ++i) {
    gen::Instance inst = i % 2 == 0 ? gen::random_blocks(rng, 3 + rng() % 4) : small_logistics(rng);
    Task task(inst.problem);
    Plan plan = i % 4 < 2 ? inst.plan : mutate(rng, task, inst.plan);
    const bool ok = validate(task, plan).valid();
    const EvaluationResult e = evaluate_plan(task, plan);
    valid += ok;
    unreachable += e.unreachable;
    const bool consistent = e.unreachable ? !ok && e.cost() == kInfiniteCost
                                          : (e.repair.size() == 0) == ok && e.cost() == static_cast<double>(e.repair.size());
    violations += !consistent;
  }
  return {violations == 0, std::to_string(violations) + " violations over " + std::to_string(kEvaluatePairs) +
                               " pairs (" + std::to_string(valid) + " valid, " + std::to_string(unreachable) +
                               " with an unreachable flaw at infinite cost)"};
}

// 6 ------------------------------------------------------------------------

Verdict retrieval_exactness() {
  gen::Rng rng(6);
  gen::Instance query = gen::random_blocks(rng, 6);
  gen::Renamed stored = gen::rename_objects(rng, query);
  CaseBase base;
  const std::size_t plant_at = kLibrarySize / 2;
  CaseId planted = 0;
  for (std::size_t i = 0; i < kLibrarySize; ++i) {
    if (i == plant_at) {
      planted = base.add(stored.instance.problem, stored.instance.plan);
      continue;
    }
    gen::Instance other = gen::random_blocks(rng, 3 + rng() % 6);
    base.add(other.problem, other.plan);
  }
  RetrievalResult r = retrieve(base, query.problem);
  bool shrinking = r.trace.size() == 4;
  for (std::size_t k = 1; k < r.trace.size(); ++k) shrinking = shrinking && r.trace[k].candidates <= r.trace[k - 1].candidates;
  const bool found = r.case_id == planted && r.best_cost == 0.0 && validate(Task(query.problem), r.plan).valid();

  RetrievalConfig cfg;
  CaseBase empty;
  RetrievalResult e = retrieve(empty, query.problem, cfg);
  const bool fallback = e.plan.steps.empty() && !e.case_id && e.relaxed.size() > 0 &&
                        e.best_cost == cfg.alpha_g * static_cast<double>(e.relaxed.size());

  std::ostringstream d;
  d << "planted case " << (found ? "returned at cost 0" : "missed") << ", trace";
  for (const auto& t : r.trace) d << ' ' << t.stage << '=' << t.candidates;
  d << (shrinking ? " (shrinking)" : " (not shrinking)") << ", empty library best_cost " << e.best_cost << " = "
    << cfg.alpha_g << "*" << e.relaxed.size();
  return {found && shrinking && fallback, d.str()};
}

// 7 ------------------------------------------------------------------------

Verdict merge_competence() {
  gen::Rng rng(7);
  // a library holds one domain, so towers and deliveries get one each
  CaseBase towers, deliveries;
  for (bool both : {true, false}) {
    gen::Instance t = gen::tower_reversal("lib", both);
    insert_case(towers, t.problem, t.plan);
    update_library(towers, t.problem, t.plan);
  }
  // enough solutions to cover the single-package configurations; dominance
  // collapses repeats
  for (std::size_t i = 0; i < kDeliverySolutions; ++i) {
    gen::Instance l = gen::random_logistics(rng, {});
    insert_case(deliveries, l.problem, l.plan);
    update_library(deliveries, l.problem, l.plan);
  }
  std::size_t solved = 0, non_decreasing = 0;
  std::size_t solved_by_kind[2] = {0, 0};
  for (std::size_t i = 0; i < kMergeInstances; ++i) {
    gen::Instance combined;
    if (i % 2 == 0) {
      combined = gen::disjoint_union({gen::tower_reversal("", rng() % 2 == 0), gen::tower_reversal("", rng() % 2 == 0)});
    } else {
      std::vector<gen::Instance> parts;
      for (std::size_t k = 0, n = 2 + rng() % 2; k < n; ++k) parts.push_back(gen::random_logistics(rng, {}));
      combined = gen::disjoint_union(parts);
    }
    gen::Renamed r = gen::rename_objects(rng, combined);
    MergeResult m = merge_subplans(i % 2 == 0 ? towers : deliveries, r.instance.problem);
    for (const auto& it : m.iterations) non_decreasing += !(it.cost_after < it.cost_before);
    Task task(r.instance.problem);
    const bool ok = m.cost == 0.0 && evaluate_plan(task, m.plan).cost() == 0.0 && validate(task, m.plan).valid();
    solved += ok;
    solved_by_kind[i % 2] += ok;
  }
  const double rate = static_cast<double>(solved) / kMergeInstances;
  char buf[256];
  std::snprintf(buf, sizeof buf, "%zu/%zu solved (%.0f%% >= %.0f%%; towers %zu, deliveries %zu), %zu non-decreasing iterations; libraries %zu+%zu cases",
                solved, kMergeInstances, 100 * rate, 100 * kMergeSuccessRate, solved_by_kind[0], solved_by_kind[1], non_decreasing, towers.size(),
                deliveries.size());
  return {rate >= kMergeSuccessRate && non_decreasing == 0, buf};
}

// 8 ------------------------------------------------------------------------

Verdict insert_policy() {
  auto domain = test::load_domain("blocks/domain.pddl");
  Problem p = parse_problem(domain,
                            "(define (problem onab) (:domain blocks) (:objects a b c - block)"
                            " (:init (on c a) (ontable a) (ontable b) (clear c) (clear b)) (:goal (on a b)))");
  auto plan = [](std::initializer_list<const char*> texts) {
    Plan out;
    for (const char* t : texts) out.steps.push_back(test::step(t));
    return out;
  };
  Plan four = plan({"(unstack c a)", "(putdown c)", "(pickup a)", "(stack a b)"});
  Plan six = plan({"(unstack c a)", "(putdown c)", "(pickup a)", "(putdown a)", "(pickup a)", "(stack a b)"});

  CaseBase first;
  insert_case(first, p, four);
  InsertOutcome dominated = insert_case(first, p, six);
  const bool keep_short = first.size() == 1 && first.cases()[0].solution.size() == 4 && !dominated.inserted;

  CaseBase second;
  InsertOutcome longer = insert_case(second, p, six);
  InsertOutcome shorter = insert_case(second, p, four);
  const bool replaced = second.size() == 1 && second.cases()[0].solution.size() == 4 &&
                        shorter.replaced == std::vector<CaseId>{*longer.id};

  std::string sizes;
  bool bounds = true;
  for (std::size_t n : {4u, 5u, 200u, 201u}) {
    test::Delivery d(n);
    CaseBase b;
    const bool inserted = d.plan.size() == n && check_and_insert(b, d.problem, d.plan).inserted;
    bounds = bounds && inserted == (n >= kMinSubplanSize && n <= kMaxSubplanSize);
    sizes += " " + std::to_string(n) + (inserted ? ":in" : ":skip");
  }
  return {keep_short && replaced && bounds, std::string("4-then-6 keeps 4: ") + (keep_short ? "yes" : "no") +
                                                ", 6-then-4 replaces: " + (replaced ? "yes" : "no") + ", sizes" +
                                                sizes};
}

// 9 ------------------------------------------------------------------------

std::map<fs::path, std::string> snapshot(const fs::path& dir) {
  std::map<fs::path, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(dir))
    if (e.is_regular_file()) {
      std::ifstream in(e.path(), std::ios::binary);
      std::ostringstream ss;
      ss << in.rdbuf();
      out[fs::relative(e.path(), dir)] = ss.str();
    }
  return out;
}

Verdict determinism_and_persistence() {
  const fs::path root = fs::temp_directory_path() / "oak-acceptance-9";
  fs::remove_all(root);
  fs::create_directories(root);
  gen::Rng rng(9);
  {
    CaseBase base = CaseBase::open(root / "lib");
    for (int i = 0; i < 8; ++i) {
      gen::Instance inst = gen::random_blocks(rng, 4 + i % 3);
      insert_case(base, inst.problem, inst.plan);
      update_library(base, inst.problem, inst.plan);
    }
  }
  gen::Instance query = gen::random_blocks(rng, 5);
  std::ofstream(root / "domain.pddl") << format_domain(query.problem.domain());
  std::ofstream(root / "problem.pddl") << format_problem(query.problem);

  cli::SolveOptions opt;
  opt.domain = (root / "domain.pddl").string();
  opt.problem = (root / "problem.pddl").string();
  opt.library = (root / "lib").string();
  opt.merge = true;
  std::string outputs[2];
  int codes[2];
  for (int k = 0; k < 2; ++k) {
    std::ostringstream out, err;
    codes[k] = cli::cmd_solve(opt, out, err);
    outputs[k] = out.str() + err.str();
  }
  const bool same_output = outputs[0] == outputs[1] && codes[0] != 1;

  const auto before = snapshot(root / "lib");
  CaseBase loaded = CaseBase::open(root / "lib");
  bool recomputed = true;
  for (const auto& c : loaded.cases())
    recomputed = recomputed && c.encoding == encode_problem(c.problem) && c.signature == degree_signature(c.encoding);
  loaded.save_to(root / "copy");
  const bool bit_exact = before == snapshot(root / "copy");
  return {same_output && recomputed && bit_exact,
          std::string("solve twice identical: ") + (same_output ? "yes" : "no") + " (exit " +
              std::to_string(codes[0]) + "), " + std::to_string(loaded.size()) + " cases recompute equal: " +
              (recomputed ? "yes" : "no") + ", round trip bit-exact: " + (bit_exact ? "yes" : "no")};
}

}  // namespace

int main() {
  struct Criterion {
    int number;
    const char* name;
    std::function<Verdict()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "sussman-encoding", sussman_encoding},
      {2, "renaming-recovery", renaming_recovery},
      {3, "exact-match-dominance", oracle_dominance},
      {4, "ds-screen-admissibility", ds_admissibility},
      {5, "evaluate-iff-valid", evaluate_validity},
      {6, "retrieval-exactness", retrieval_exactness},
      {7, "merge-competence", merge_competence},
      {8, "insert-dominance-policy", insert_policy},
      {9, "determinism-persistence", determinism_and_persistence},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    failures += !v.pass;
    std::printf("[%s] %d %s: %s\n", v.pass ? "PASS" : "FAIL", c.number, c.name, v.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
