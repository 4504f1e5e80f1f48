#include "oak/case_base.hpp"

#include <algorithm>
#include <functional>
#include <iterator>
#include <map>
#include <set>

#include "oak/errors.hpp"
#include "oak/pddl.hpp"

namespace oak {

std::map<std::string, std::size_t> PlanningCase::sort_counts() const {
  std::map<std::string, std::size_t> out;
  for (const auto& o : problem.own_objects()) ++out[o.sort];
  return out;
}

const PlanningCase* CaseBase::find(CaseId id) const {
  for (const auto& c : cases_)
    if (c.id == id) return &c;
  return nullptr;
}

CaseId CaseBase::add(Problem problem, Plan solution, CaseKind kind, std::optional<CaseId> parent) {
  if (!domain_) {
    domain_ = problem.domain_ptr();
    if (dir_) persist_domain();
  } else if (problem.domain_ptr() != domain_ && format_domain(problem.domain()) != format_domain(*domain_)) {
    throw LibraryError("case domain " + problem.domain().name + " differs from library domain " + domain_->name);
  }
  PlanningCase c;
  c.id = next_id_++;
  c.kind = kind;
  c.parent_id = parent;
  c.encoding = encode_problem(problem);
  c.signature = degree_signature(c.encoding);
  c.problem = std::move(problem);
  c.solution = std::move(solution);
  if (dir_) persist_case(c);
  cases_.push_back(std::move(c));
  if (dir_) persist_index();
  return cases_.back().id;
}

void CaseBase::remove(CaseId id) {
  auto it = std::find_if(cases_.begin(), cases_.end(), [&](const PlanningCase& c) { return c.id == id; });
  if (it == cases_.end()) return;
  cases_.erase(it);
  if (dir_) {
    persist_index();
    unpersist_case(id);
  }
}

void CaseBase::record_usage(CaseId id, bool success) {
  for (auto& c : cases_)
    if (c.id == id) {
      ++c.usage.attempts;
      if (success) ++c.usage.successes;
      if (dir_) {
        persist_case(c);
        persist_index();
      }
      return;
    }
}

// Causal links

std::vector<CausalLink> CausalLinkSet::into(std::size_t consumer) const {
  std::vector<CausalLink> out;
  for (const auto& l : links)
    if (l.consumer == consumer) out.push_back(l);
  return out;
}

CausalLinkSet causal_links(const Task& task, const Plan& plan) {
  CausalLinkSet out;
  // producer[f]: step that last added f (kInit for initial facts); absent when false.
  std::map<FactId, std::size_t> producer;
  const FactSet& init = task.init();
  for (auto f = init.find_first(); f != FactSet::npos; f = init.find_next(f))
    producer[static_cast<FactId>(f)] = CausalLink::kInit;
  for (std::size_t i = 0; i < plan.steps.size(); ++i) {
    GroundAction a = task.instantiate(plan.steps[i]);
    for (FactId p : a.pre) {
      auto it = producer.find(p);
      if (it == producer.end())
        throw InvalidPlan("precondition " + task.fact_name(p) + " of step " + std::to_string(i) + " " +
                          plan.steps[i].to_string() + " is unsupported");
      out.links.push_back({it->second, p, i});
    }
    for (FactId d : a.del) producer.erase(d);
    for (FactId f : a.add) producer[f] = i;
  }
  const FactSet& goals = task.goals();
  for (auto g = goals.find_first(); g != FactSet::npos; g = goals.find_next(g)) {
    auto it = producer.find(static_cast<FactId>(g));
    if (it == producer.end()) throw InvalidPlan("goal " + task.fact_name(static_cast<FactId>(g)) + " is unsatisfied");
    out.links.push_back({it->second, static_cast<FactId>(g), CausalLink::kGoal});
  }
  return out;
}

namespace {

// Producer of `fact` at the end of the plan, or kInit; nullopt if false there.
std::optional<std::size_t> final_producer(const Task& task, const Plan& plan, FactId fact) {
  std::optional<std::size_t> prod;
  if (task.init().test(fact)) prod = CausalLink::kInit;
  for (std::size_t i = 0; i < plan.steps.size(); ++i) {
    GroundAction a = task.instantiate(plan.steps[i]);
    if (std::binary_search(a.del.begin(), a.del.end(), fact)) prod.reset();
    if (std::binary_search(a.add.begin(), a.add.end(), fact)) prod = i;
  }
  return prod;
}

std::string subproblem_name(const Problem& p, const Task& task, const std::vector<FactId>& targets) {
  std::string name = p.name() + "-sub";
  for (FactId t : targets) {
    for (char c : task.fact_name(t))
      if (c == ' ')
        name += '_';
      else if (c != '(' && c != ')')
        name += c;
    name += '-';
  }
  name.pop_back();
  return name;
}

}  // namespace

Subcase goal_subplan(const Task& task, const Plan& plan, const CausalLinkSet& links,
                     const std::vector<FactId>& targets) {
  std::set<std::size_t> chosen;
  std::vector<std::size_t> stack;
  FactSet consumed_from_init = task.empty_set();
  for (FactId t : targets) {
    auto prod = final_producer(task, plan, t);
    if (!prod) throw InvalidPlan("fact " + task.fact_name(t) + " does not hold at the end of the plan");
    if (*prod == CausalLink::kInit)
      consumed_from_init.set(t);
    else if (chosen.insert(*prod).second)
      stack.push_back(*prod);
  }
  while (!stack.empty()) {
    std::size_t step = stack.back();
    stack.pop_back();
    for (const auto& l : links.into(step)) {
      if (l.producer == CausalLink::kInit)
        consumed_from_init.set(l.fact);
      else if (chosen.insert(l.producer).second)
        stack.push_back(l.producer);
    }
  }

  Subcase sub;
  sub.steps.assign(chosen.begin(), chosen.end());
  std::set<std::string> objects;
  for (std::size_t i : sub.steps) {
    sub.plan.steps.push_back(plan.steps[i]);
    objects.insert(plan.steps[i].args.begin(), plan.steps[i].args.end());
  }
  FactSet init = (consumed_from_init | relevant_init_facts(task, sub.plan)) & task.init();
  std::vector<Fact> init_facts = task.to_facts(init);
  std::vector<Fact> goal_facts;
  for (FactId t : targets) goal_facts.push_back(task.fact(t));
  for (const auto* facts : {&init_facts, &goal_facts})
    for (const auto& f : *facts) objects.insert(f.args.begin(), f.args.end());
  const Problem& p = task.problem();
  sub.problem = p.restricted_to({objects.begin(), objects.end()}, std::move(init_facts), std::move(goal_facts),
                                subproblem_name(p, task, targets));
  return sub;
}

Subcase goal_subplan(const Task& task, const Plan& plan, const CausalLinkSet& links, FactId target) {
  return goal_subplan(task, plan, links, std::vector<FactId>{target});
}

// Insertion policy

namespace {

// Cases whose problem matches `problem` completely, i.e. complete_simil = 1
// under the neighbourhood-kernel mapping. Only cases with an identical degree
// signature can match, so the others are never kernel-matched.
std::vector<const PlanningCase*> perfect_matches(const CaseBase& base, const Problem& problem,
                                                 const PlanningEncodingGraph& graph, const DegreeSignature& sig,
                                                 double gamma) {
  std::vector<const PlanningCase*> out;
  for (const auto& c : base.cases()) {
    if (c.signature != sig) continue;
    if (c.problem.init().size() != problem.init().size() || c.problem.goals().size() != problem.goals().size())
      continue;
    KernelMatch km = kernel_neighborhood(c.encoding, graph, gamma);
    auto mu = complete_mapping(c.problem, problem, km.mapping);
    if (!mu) continue;
    if (complete_simil(c.problem, problem, *mu) == 1.0) out.push_back(&c);
  }
  return out;
}

InsertOutcome store_unless_dominated(CaseBase& base, Problem reduced, Plan plan, CaseKind kind,
                                     std::optional<CaseId> parent, double gamma) {
  InsertOutcome out;
  PlanningEncodingGraph graph = encode_problem(reduced);
  DegreeSignature sig = degree_signature(graph);
  std::vector<CaseId> longer;
  for (const PlanningCase* c : perfect_matches(base, reduced, graph, sig, gamma)) {
    if (c->solution.size() <= plan.size()) {
      out.dominated_by = c->id;
      return out;
    }
    longer.push_back(c->id);
  }
  for (CaseId id : longer) base.remove(id);
  out.replaced = std::move(longer);
  out.id = base.add(std::move(reduced), std::move(plan), kind, parent);
  out.inserted = true;
  return out;
}

}  // namespace

InsertOutcome insert_case(CaseBase& base, const Problem& problem, const Plan& plan, double gamma) {
  Task task(problem);
  ValidationReport report = validate(task, plan);
  if (!report.valid())
    throw InvalidPlan("plan does not solve " + problem.name() + " (" + std::to_string(report.unsupported.size()) +
                      " unsupported preconditions, " + std::to_string(report.unsatisfied_goals.size()) +
                      " unsatisfied goals)");
  std::vector<Fact> init = task.to_facts(relevant_init_facts(task, plan));
  std::set<std::string> objects;
  for (const auto& s : plan.steps) objects.insert(s.args.begin(), s.args.end());
  for (const std::vector<Fact>* facts : std::initializer_list<const std::vector<Fact>*>{&init, &problem.goals()})
    for (const auto& f : *facts) objects.insert(f.args.begin(), f.args.end());
  Problem reduced = problem.restricted_to({objects.begin(), objects.end()}, std::move(init), problem.goals(),
                                          problem.name());
  return store_unless_dominated(base, std::move(reduced), plan, CaseKind::Solution, std::nullopt, gamma);
}

InsertOutcome check_and_insert(CaseBase& base, const Problem& subproblem, const Plan& subplan,
                               std::optional<CaseId> parent, double gamma) {
  if (subplan.size() < kMinSubplanSize || subplan.size() > kMaxSubplanSize) return {};
  return store_unless_dominated(base, subproblem, subplan, CaseKind::Subplan, parent, gamma);
}

UpdateReport update_library(CaseBase& base, const Problem& problem, const Plan& plan, const std::vector<Fact>& extra,
                            std::optional<CaseId> parent, double gamma) {
  Task task(problem);
  CausalLinkSet links = causal_links(task, plan);
  std::vector<FactId> goals;
  const FactSet& g = task.goals();
  for (auto f = g.find_first(); f != FactSet::npos; f = g.find_next(f)) goals.push_back(static_cast<FactId>(f));

  std::vector<std::vector<FactId>> groups;
  std::vector<Subcase> per_goal;
  for (FactId goal : goals) {
    groups.push_back({goal});
    per_goal.push_back(goal_subplan(task, plan, links, goal));
  }
  for (const auto& f : extra) {
    auto id = task.find_fact(f);
    if (!id || std::find(goals.begin(), goals.end(), *id) != goals.end()) continue;
    try {
      goal_subplan(task, plan, links, *id);
    } catch (const InvalidPlan&) {
      continue;  // does not hold at the end of the plan
    }
    groups.push_back({*id});
  }

  // Connected components of the "subplans share a step" relation.
  std::vector<std::size_t> component(goals.size());
  for (std::size_t i = 0; i < goals.size(); ++i) component[i] = i;
  std::function<std::size_t(std::size_t)> root = [&](std::size_t i) {
    return component[i] == i ? i : component[i] = root(component[i]);
  };
  for (std::size_t i = 0; i < goals.size(); ++i)
    for (std::size_t j = i + 1; j < goals.size(); ++j) {
      const auto& a = per_goal[i].steps;
      const auto& b = per_goal[j].steps;
      std::vector<std::size_t> common;
      std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(common));
      if (!common.empty()) component[root(i)] = root(j);
    }
  std::map<std::size_t, std::vector<FactId>> by_root;
  for (std::size_t i = 0; i < goals.size(); ++i) by_root[root(i)].push_back(goals[i]);
  for (const auto& [_, members] : by_root)
    if (members.size() > 1) groups.push_back(members);

  UpdateReport report;
  for (const auto& group : groups) {
    Subcase sub = goal_subplan(task, plan, links, group);
    std::vector<Fact> facts;
    for (FactId f : group) facts.push_back(task.fact(f));
    report.candidate_goals.push_back(std::move(facts));
    report.candidate_sizes.push_back(sub.plan.size());
    ++report.candidates;
    InsertOutcome o = check_and_insert(base, sub.problem, sub.plan, parent, gamma);
    if (o.inserted) ++report.inserted;
    report.outcomes.push_back(std::move(o));
  }
  return report;
}

}  // namespace oak
