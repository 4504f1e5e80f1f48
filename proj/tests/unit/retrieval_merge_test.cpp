#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "generators.hpp"
#include "oak/merge.hpp"
#include "oak/retrieval.hpp"

using namespace oak;
using oak::test::fact;
using oak::test::step;

namespace {

CaseBase tower_library() {
  CaseBase base;
  gen::Instance t = gen::tower_reversal("lib");
  insert_case(base, t.problem, t.plan);
  return base;
}

}  // namespace

TEST(Retrieve, EmptyLibraryFallsBackToScratch) {
  test::Sussman s;
  CaseBase base;
  RetrievalConfig cfg;
  cfg.alpha_g = 1.5;
  RetrievalResult r = retrieve(base, s.problem, cfg);
  EXPECT_TRUE(r.plan.steps.empty());
  EXPECT_FALSE(r.case_id);
  EXPECT_EQ(r.relaxed.size(), 5u);
  EXPECT_DOUBLE_EQ(r.relaxed_cost, 5.0);
  EXPECT_DOUBLE_EQ(r.best_cost, 1.5 * 5.0);
}

TEST(Retrieve, RenamedCopyCostsNothing) {
  test::Sussman s;
  CaseBase base;
  insert_case(base, s.problem, s.plan);
  Problem renamed = test::load_problem(s.domain, "blocks/sussman-renamed.pddl");
  RetrievalResult r = retrieve(base, renamed);
  ASSERT_TRUE(r.case_id);
  EXPECT_DOUBLE_EQ(r.best_cost, 0.0);
  EXPECT_TRUE(validate(Task(renamed), r.plan).valid());
  EXPECT_EQ(r.plan.steps.front(), step("(unstack z x)"));
  ASSERT_EQ(r.trace.size(), 4u);
  EXPECT_EQ(r.trace[0].stage, "ds");
  EXPECT_EQ(r.trace[3].stage, "cost");
  EXPECT_NE(format_trace(r).find("stage=base candidates=1"), std::string::npos) << format_trace(r);
}

TEST(Retrieve, SmallAlphaPrefersScratch) {
  test::Sussman s;
  CaseBase base;
  insert_case(base, s.problem, s.plan);
  Problem other = parse_problem(s.domain,
                                "(define (problem o) (:domain blocks) (:objects a b c - block)"
                                " (:init (ontable a) (ontable b) (ontable c) (clear a) (clear b) (clear c))"
                                " (:goal (and (on c b))))");
  RetrievalConfig cfg;
  cfg.alpha_g = 1e-6;
  RetrievalResult r = retrieve(base, other, cfg);
  EXPECT_FALSE(r.case_id);
  EXPECT_TRUE(r.plan.steps.empty());
}

TEST(Retrieve, OtherDomainCasesAreNotCandidates) {
  gen::Rng rng(3);
  CaseBase base;
  gen::Instance l = gen::random_logistics(rng, {});
  insert_case(base, l.problem, l.plan);
  gen::Instance other = gen::random_logistics(rng, {3, 1, 1, 1});
  RetrievalResult r = retrieve(base, other.problem);
  for (const auto& c : r.candidates) EXPECT_GE(c.ds, 0.0);
  if (r.case_id) EXPECT_LE(r.best_cost, r.relaxed_cost);
}

TEST(MergePlans, EmptyBaseReturnsBlock) {
  test::Sussman s;
  Task t(s.problem);
  EXPECT_EQ(merge_plans(t, Plan{}, s.plan), s.plan);
  EXPECT_EQ(merge_plans(t, s.plan, Plan{}), s.plan);
}

TEST(MergePlans, IndependentTowersConcatenate) {
  gen::Instance a = gen::tower_reversal("a");
  gen::Instance b = gen::tower_reversal("b");
  gen::Instance both = gen::disjoint_union({a, b});
  Task t(both.problem);
  Plan pa, pb;
  pa.steps.assign(both.plan.steps.begin(), both.plan.steps.begin() + 6);
  pb.steps.assign(both.plan.steps.begin() + 6, both.plan.steps.end());
  Plan merged = merge_plans(t, pa, pb);
  EXPECT_EQ(merged.size(), 12u);
  EXPECT_TRUE(validate(t, merged).valid());
  EXPECT_DOUBLE_EQ(evaluate_plan(t, merged).cost(), 0.0);
}

TEST(MergeSubplans, TwoTowers) {
  CaseBase base = tower_library();
  gen::Rng rng(19);
  gen::Instance both = gen::disjoint_union({gen::tower_reversal("a"), gen::tower_reversal("b")});
  gen::Renamed r = gen::rename_objects(rng, both);
  MergeResult m = merge_subplans(base, r.instance.problem);
  EXPECT_DOUBLE_EQ(m.cost, 0.0);
  EXPECT_TRUE(validate(Task(r.instance.problem), m.plan).valid());
  ASSERT_FALSE(m.iterations.empty());
  for (const auto& it : m.iterations) EXPECT_LT(it.cost_after, it.cost_before);
}

TEST(RepairCompletion, ValidPlanUnchanged) {
  test::Sussman s;
  Task t(s.problem);
  EXPECT_EQ(repair_completion(t, s.plan), s.plan);
}

TEST(RepairCompletion, CompletesTruncatedPlan) {
  test::Sussman s;
  Task t(s.problem);
  Plan cut = s.plan;
  cut.steps.pop_back();
  Plan fixed = repair_completion(t, cut);
  EXPECT_TRUE(validate(t, fixed).valid());
  EXPECT_EQ(fixed, s.plan);
}

TEST(RepairCompletion, HandDomainIsIncomplete) {
  auto d = test::load_domain("blocks-hand/domain.pddl");
  Problem p = test::load_problem(d, "blocks-hand/sussman.pddl");
  Task t(p);
  try {
    repair_completion(t, Plan{});
    FAIL() << "expected IncompleteRepair";
  } catch (const IncompleteRepair& e) {
    EXPECT_FALSE(validate(t, e.plan()).valid());
    EXPECT_LT(evaluate_plan(t, e.plan()).cost(), evaluate_plan(t, Plan{}).cost());
  }
}

TEST(DifferingActions, Multiset) {
  test::Sussman s;
  EXPECT_EQ(differing_actions(s.plan, s.plan), 0u);
  EXPECT_EQ(differing_actions(s.plan, Plan{}), 6u);
  Plan extra = s.plan;
  extra.steps.push_back(step("(pickup a)"));
  EXPECT_EQ(differing_actions(s.plan, extra), 1u);
}
