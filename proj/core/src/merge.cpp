#include "oak/merge.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <tuple>

namespace oak {
namespace {

Plan splice(const Plan& pi, const Plan& block, std::size_t pos) {
  Plan out;
  out.steps.reserve(pi.size() + block.size());
  out.steps.insert(out.steps.end(), pi.steps.begin(), pi.steps.begin() + static_cast<std::ptrdiff_t>(pos));
  out.steps.insert(out.steps.end(), block.steps.begin(), block.steps.end());
  out.steps.insert(out.steps.end(), pi.steps.begin() + static_cast<std::ptrdiff_t>(pos), pi.steps.end());
  return out;
}

// Facts some step of the block needs that no earlier block step provides.
FactSet net_preconditions(const Task& task, const Plan& block) {
  FactSet need = task.empty_set();
  FactSet avail = task.empty_set();
  for (const auto& s : block.steps) {
    GroundAction a = task.instantiate(s);
    for (FactId p : a.pre)
      if (!avail.test(p)) need.set(p);
    for (FactId d : a.del) avail.reset(d);
    for (FactId f : a.add) avail.set(f);
  }
  return need;
}

std::vector<FactId> ordered_by_name(const Task& task, std::vector<FactId> facts) {
  std::sort(facts.begin(), facts.end(),
            [&](FactId a, FactId b) { return task.fact_name(a) < task.fact_name(b); });
  facts.erase(std::unique(facts.begin(), facts.end()), facts.end());
  return facts;
}

// Unsatisfied facts of `pi`: goals first, then step preconditions.
std::vector<FactId> open_facts(const Task& task, const Plan& pi) {
  ValidationReport v = validate(task, pi);
  std::vector<FactId> goals = ordered_by_name(task, v.unsatisfied_goals);
  std::vector<FactId> pres;
  for (const auto& flaw : v.unsupported)
    if (std::find(goals.begin(), goals.end(), flaw.fact) == goals.end()) pres.push_back(flaw.fact);
  pres = ordered_by_name(task, std::move(pres));
  goals.insert(goals.end(), pres.begin(), pres.end());
  return goals;
}

// Binds the case goal's arguments to the open fact's, if sorts agree.
std::optional<ObjectMapping> unify(const Problem& case_problem, const Fact& case_goal, const Problem& problem,
                                   const Fact& fact) {
  if (case_goal.predicate != fact.predicate || case_goal.args.size() != fact.args.size()) return std::nullopt;
  const auto& constants = problem.domain().constants;
  auto is_constant = [&](const std::string& o) {
    return std::any_of(constants.begin(), constants.end(), [&](const TypedName& c) { return c.name == o; });
  };
  ObjectMapping mu;
  for (std::size_t j = 0; j < fact.args.size(); ++j) {
    const std::string& from = case_goal.args[j];
    const std::string& to = fact.args[j];
    if (is_constant(from) || is_constant(to)) {
      if (from != to) return std::nullopt;
    } else if (case_problem.sort_of(from) != problem.sort_of(to)) {
      return std::nullopt;
    }
    auto [it, fresh] = mu.pairs.emplace(from, to);
    if (!fresh && it->second != to) return std::nullopt;
  }
  if (!mu.injective()) return std::nullopt;
  return mu;
}

double evaluate_cost(const Task& task, const Plan& plan, double climit = kInfiniteCost) {
  EvaluationResult e = evaluate_plan(task, plan, climit);
  return e.truncated ? kInfiniteCost : e.cost();
}

}  // namespace

Plan merge_plans(const Task& task, const Plan& pi, const Plan& pi_f, std::optional<FactId> f) {
  if (pi.empty()) return Plan{pi_f.steps, {}};
  if (pi_f.empty()) return Plan{pi.steps, {}};

  const FactSet need = net_preconditions(task, pi_f);
  std::vector<FactSet> states{task.init()};
  std::vector<GroundAction> ground;
  for (const auto& s : pi.steps) {
    ground.push_back(task.instantiate(s));
    states.push_back(oak::apply(states.back(), ground.back()));
  }

  std::size_t earliest = 0, best_held = 0;
  for (std::size_t k = 0; k < states.size(); ++k) {
    std::size_t held = (need & states[k]).count();
    if (held == need.count()) {
      earliest = k;
      break;
    }
    if (held > best_held) {
      best_held = held;
      earliest = k;
    }
  }
  std::size_t latest = pi.size();
  if (f) {
    for (std::size_t i = 0; i < ground.size(); ++i)
      if (std::binary_search(ground[i].pre.begin(), ground[i].pre.end(), *f) && !states[i].test(*f)) {
        latest = i;
        break;
      }
  }

  Plan first = splice(pi, pi_f, earliest);
  if (latest == earliest) return first;
  Plan second = splice(pi, pi_f, latest);
  return evaluate_cost(task, second) < evaluate_cost(task, first) ? second : first;
}

MergeResult merge_subplans(const CaseBase& base, const Problem& problem, const RetrievalConfig& config) {
  MergeResult out;
  Task task(problem);
  out.retrieval = retrieve(base, problem, config);
  out.plan = out.retrieval.plan;
  out.seed_case = out.retrieval.case_id;
  out.cost = evaluate_cost(task, out.plan);
  const PlanningEncodingGraph graph = encode_problem(problem);

  while (out.cost > 0) {
    bool merged = false;
    for (FactId f : open_facts(task, out.plan)) {
      const Fact& fact = task.fact(f);
      // (cost, -success rate, |π_f|, id)
      using Rank = std::tuple<double, double, std::size_t, CaseId>;
      std::optional<Rank> best_rank;
      Plan best_plan;
      for (const auto& c : base.cases()) {
        for (const auto& g : c.problem.goals()) {
          auto anchors = unify(c.problem, g, problem, fact);
          if (!anchors) continue;
          auto mu = anchored_mapping(c.problem, c.encoding, problem, graph, *anchors, config.gamma);
          if (!mu) continue;
          Plan pi_f;
          try {
            pi_f = map_plan(*mu, c.solution);
            Plan candidate = merge_plans(task, out.plan, pi_f, f);
            double cost = evaluate_cost(task, candidate, std::isinf(out.cost) ? kInfiniteCost : out.cost - 1);
            if (!(cost < out.cost)) continue;
            Rank rank{cost, -c.usage.success_rate(), pi_f.size(), c.id};
            if (!best_rank || rank < *best_rank) {
              best_rank = rank;
              best_plan = std::move(candidate);
            }
          } catch (const Error&) {
            continue;  // mapped steps outside the problem's sorts
          }
        }
      }
      if (best_rank) {
        out.iterations.push_back({fact, std::get<3>(*best_rank), out.cost, std::get<0>(*best_rank)});
        out.plan = std::move(best_plan);
        out.cost = std::get<0>(*best_rank);
        merged = true;
        break;
      }
    }
    if (!merged) break;
  }
  return out;
}

Plan repair_completion(const Task& task, const Plan& plan) {
  Plan current{plan.steps, {}};
  if (validate(task, current).valid()) return current;
  double cost = evaluate_cost(task, current);
  Plan best = current;
  for (;;) {
    // Replays evaluate_plan's walk, splicing each new repair batch in front
    // of the step that triggered it.
    RelaxedPlanResult repair;
    repair.achieved = task.empty_set();
    FactSet state = task.init();
    Plan next;
    auto extend = [&](const FactSet& wanted) {
      std::size_t before = repair.actions.size();
      RelaxedPlanner(task, state).extend(wanted, repair);
      for (std::size_t k = before; k < repair.actions.size(); ++k)
        next.steps.push_back(task.action(repair.actions[k]).step);
    };
    try {
      for (const auto& s : current.steps) {
        GroundAction a = task.instantiate(s);
        if (!supported(state, a)) {
          FactSet pre = task.empty_set();
          for (FactId p : a.pre) pre.set(p);
          extend(pre);
        }
        next.steps.push_back(s);
        state = oak::apply(state, a);
      }
      if (!task.goals().is_subset_of(state)) extend(task.goals());
    } catch (const Unreachable&) {
      throw IncompleteRepair(best);
    }
    if (validate(task, next).valid()) return next;
    double next_cost = evaluate_cost(task, next);
    if (!(next_cost < cost)) throw IncompleteRepair(best);
    cost = next_cost;
    best = next;
    current = std::move(next);
  }
}

std::size_t differing_actions(const Plan& a, const Plan& b) {
  std::map<Step, long> diff;
  for (const auto& s : a.steps) ++diff[s];
  for (const auto& s : b.steps) --diff[s];
  std::size_t n = 0;
  for (const auto& [_, d] : diff) n += static_cast<std::size_t>(d < 0 ? -d : d);
  return n;
}

}  // namespace oak
