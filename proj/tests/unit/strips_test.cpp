#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "generators.hpp"
#include "oak/errors.hpp"
#include "oak/task.hpp"
#include "oracles.hpp"

using namespace oak;
using oak::test::fact;
using oak::test::step;

TEST(Parse, SussmanShape) {
  test::Sussman s;
  EXPECT_EQ(s.problem.objects().size(), 3u);
  for (const auto& o : s.problem.objects()) EXPECT_EQ(o.sort, "block");
  EXPECT_EQ(s.problem.init().size(), 5u);
  EXPECT_EQ(s.problem.goals().size(), 2u);
  // symbols are lower-cased
  EXPECT_EQ(s.problem.objects().front().name, "a");
  EXPECT_EQ(s.plan.size(), 6u);
  EXPECT_EQ(s.plan.steps[0], step("(unstack c a)"));
}

TEST(Parse, EmptyGoalIsValid) {
  auto d = test::load_domain("blocks/domain.pddl");
  Problem p = parse_problem(d, "(define (problem e) (:domain blocks) (:objects a - block) (:init (clear a)) (:goal (and)))");
  EXPECT_TRUE(p.goals().empty());
  Task t(p);
  EXPECT_TRUE(validate(t, Plan{}).valid());
}

TEST(Parse, UndeclaredObjectIsSortError) {
  auto d = test::load_domain("blocks/domain.pddl");
  EXPECT_THROW(parse_problem(d, "(define (problem e) (:domain blocks) (:objects a - block) (:init (on a d)) (:goal (and)))"),
               SortError);
}

TEST(Parse, ArityAndSortMismatch) {
  auto d = test::load_domain("logistics/domain.pddl");
  const std::string head = "(define (problem e) (:domain logistics) (:objects c - city p - package a - airport) ";
  EXPECT_THROW(parse_problem(d, head + "(:init (at p)) (:goal (and)))"), SortError);
  EXPECT_THROW(parse_problem(d, head + "(:init (in-city c a)) (:goal (and)))"), SortError);
  // subsorts are accepted in a supersort slot
  EXPECT_NO_THROW(parse_problem(d, head + "(:init (at p a) (in-city a c)) (:goal (and)))"));
}

TEST(Parse, SyntaxErrorCarriesPosition) {
  try {
    parse_domain("(define (domain d)\n  (:predicates (p ?x)\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_GE(e.line(), 1u);
    EXPECT_GE(e.column(), 1u);
  }
}

TEST(Parse, UnsupportedFeaturesAreNamed) {
  const std::string base = "(define (domain d) (:requirements :strips :typing) (:predicates (p) (q)) ";
  struct Case {
    std::string text;
    std::string feature;
  };
  const std::vector<Case> cases{
      {"(define (domain d) (:requirements :adl))", ":adl"},
      {base + "(:action a :parameters () :precondition (not (p)) :effect (q)))", "negative preconditions"},
      {base + "(:action a :parameters () :precondition (p) :effect (when (p) (q))))", "conditional effects"},
      {base + "(:functions (f)))", "numeric fluents"},
  };
  for (const auto& c : cases) {
    try {
      parse_domain(c.text);
      ADD_FAILURE() << "accepted: " << c.text;
    } catch (const UnsupportedFeature& e) {
      EXPECT_NE(e.feature().find(c.feature), std::string::npos) << e.what();
    }
  }
}

TEST(Parse, CanonicalPrintingIsAFixpoint) {
  for (const char* path : {"blocks/domain.pddl", "blocks-hand/domain.pddl", "logistics/domain.pddl"}) {
    auto d = test::load_domain(path);
    std::string once = format_domain(*d);
    std::string twice = format_domain(*parse_domain(once));
    EXPECT_EQ(once, twice) << path;
  }
  test::Sussman s;
  std::string once = format_problem(s.problem);
  EXPECT_EQ(once, format_problem(parse_problem(s.domain, once)));
}

TEST(Apply, UnstackCFromA) {
  test::Sussman s;
  Task t(s.problem);
  GroundAction a = t.instantiate(step("(unstack c a)"));
  FactSet next = oak::apply(t.init(), a);
  EXPECT_TRUE(next.test(t.fact_id(fact("(holding c)"))));
  EXPECT_TRUE(next.test(t.fact_id(fact("(clear a)"))));
  EXPECT_FALSE(next.test(t.fact_id(fact("(on c a)"))));
  EXPECT_FALSE(next.test(t.fact_id(fact("(clear c)"))));
}

TEST(Apply, FixpointAndEmptyState) {
  test::Sussman s;
  Task t(s.problem);
  GroundAction a = t.instantiate(step("(putdown b)"));
  FactSet st = t.to_set({fact("(clear b)"), fact("(ontable b)")});
  EXPECT_EQ(oak::apply(st, a), st);
  FactSet added = t.empty_set();
  for (FactId f : a.add) added.set(f);
  EXPECT_EQ(oak::apply(t.empty_set(), a), added);
}

TEST(Apply, AddWinsOverDelete) {
  auto d = parse_domain(
      "(define (domain t) (:requirements :strips) (:predicates (p))"
      " (:action flip :parameters () :precondition (p) :effect (and (p) (not (p)))))");
  Problem p = parse_problem(d, "(define (problem t) (:domain t) (:init (p)) (:goal (and (p))))");
  Task t(p);
  EXPECT_TRUE(validate(t, Plan{{step("(flip)")}, {}}).valid());
}

TEST(Validate, Sussman) {
  test::Sussman s;
  Task t(s.problem);
  EXPECT_TRUE(validate(t, s.plan).valid());
  ValidationReport empty = validate(t, Plan{});
  EXPECT_FALSE(empty.valid());
  EXPECT_EQ(empty.unsatisfied_goals.size(), 2u);
}

TEST(Validate, HoldingWithHandEmpty) {
  auto d = test::load_domain("blocks-hand/domain.pddl");
  Problem p = test::load_problem(d, "blocks-hand/sussman.pddl");
  Task t(p);
  ValidationReport r = validate(t, Plan{{step("(stack a b)")}, {}});
  ASSERT_FALSE(r.valid());
  ASSERT_FALSE(r.unsupported.empty());
  EXPECT_EQ(t.fact_name(r.unsupported.front().fact), "(holding a)");
  EXPECT_EQ(r.unsupported.front().step, 0u);
}

TEST(Validate, AgreesWithOracleOnRandomPlans) {
  gen::Rng rng(11);
  for (int i = 0; i < 40; ++i) {
    gen::Instance inst = gen::random_blocks(rng, 4);
    Task t(inst.problem);
    EXPECT_TRUE(validate(t, inst.plan).valid());
    EXPECT_TRUE(oracle::valid(inst.problem, inst.plan));
    Plan broken = inst.plan;
    if (broken.steps.size() > 1) {
      std::swap(broken.steps.front(), broken.steps.back());
      EXPECT_EQ(validate(t, broken).valid(), oracle::valid(inst.problem, broken));
    }
  }
}

TEST(RelevantInit, Cases) {
  test::Sussman s;
  Task t(s.problem);
  EXPECT_TRUE(relevant_init_facts(t, Plan{}).none());
  EXPECT_EQ(relevant_init_facts(t, s.plan), t.init());  // all five initial facts are used
  Plan one{{step("(pickup b)")}, {}};
  EXPECT_EQ(t.to_facts(relevant_init_facts(t, one)), (std::vector<Fact>{fact("(clear b)"), fact("(ontable b)")}));
  EXPECT_TRUE(relevant_init_facts(t, one).is_subset_of(t.init()));
}

TEST(PlanText, RoundTrip) {
  test::Sussman s;
  std::string text = format_plan(s.plan);
  EXPECT_NE(text.find("; cost = 6"), std::string::npos);
  EXPECT_EQ(parse_plan(text), s.plan);
  EXPECT_EQ(parse_plan("0: (PICKUP A) [1]\n; comment\n1: (stack a b)\n").steps,
            (std::vector<Step>{step("(pickup a)"), step("(stack a b)")}));
  EXPECT_THROW(parse_plan("(pickup a"), ParseError);
}

TEST(Grounding, StaticPreconditionsPruneActions) {
  gen::Rng rng(3);
  gen::LogisticsShape shape;
  shape.cities = 2;
  gen::Instance inst = gen::random_logistics(rng, shape);
  Task t(inst.problem);
  const auto& init = inst.problem.init();
  auto in_city = [&](const std::string& place, const std::string& city) {
    return std::find(init.begin(), init.end(), Fact{"in-city", {place, city}}) != init.end();
  };
  for (const auto& a : t.actions())
    if (a.op() == "drive-truck") {
      // in-city is static, so drives across cities are never grounded
      EXPECT_TRUE(in_city(a.step.args[1], a.step.args[3]) && in_city(a.step.args[2], a.step.args[3]))
          << a.step.to_string();
    }
  // ...but a plan may still name one; it is grounded on demand and unsupported
  Step cross{"drive-truck", {"truck1", "apt1", "apt2", "city1"}};
  EXPECT_FALSE(t.find_action(cross));
  EXPECT_NO_THROW(t.instantiate(cross));
  EXPECT_THROW(t.instantiate(Step{"drive-truck", {"pkg1", "apt1", "apt2", "city1"}}), SortError);
}
