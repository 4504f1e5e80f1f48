#include "oak/relaxed.hpp"

#include <algorithm>

#include "oak/errors.hpp"

namespace oak {

bool RelaxedPlanResult::contains(ActionId a) const {
  return std::find(actions.begin(), actions.end(), a) != actions.end();
}

RelaxedPlanner::RelaxedPlanner(const Task& task, FactSet init)
    : task_(task),
      init_(std::move(init)),
      fact_level_(task.num_facts(), kUnreachableLevel),
      action_level_(task.actions().size(), kUnreachableLevel) {
  const auto actions = task.actions();
  std::vector<std::size_t> missing(actions.size());
  // consumers[f]: actions with f among their preconditions.
  std::vector<std::vector<ActionId>> consumers(task.num_facts());
  std::vector<FactId> frontier;
  for (ActionId a = 0; a < actions.size(); ++a) {
    missing[a] = actions[a].pre.size();
    for (FactId f : actions[a].pre) consumers[f].push_back(a);
  }
  for (auto f = init_.find_first(); f != FactSet::npos; f = init_.find_next(f)) {
    fact_level_[f] = 0;
    frontier.push_back(static_cast<FactId>(f));
  }
  std::vector<ActionId> ready;
  for (ActionId a = 0; a < actions.size(); ++a)
    if (missing[a] == 0) ready.push_back(a);

  // Layered breadth-first expansion: facts first reached at layer k get level k.
  for (int layer = 0;; ++layer) {
    for (FactId f : frontier)
      for (ActionId a : consumers[f])
        if (--missing[a] == 0) ready.push_back(a);
    frontier.clear();
    for (ActionId a : ready) {
      action_level_[a] = layer;
      for (FactId f : actions[a].add)
        if (fact_level_[f] == kUnreachableLevel) {
          fact_level_[f] = layer + 1;
          frontier.push_back(f);
        }
    }
    ready.clear();
    if (frontier.empty()) break;
  }
}

std::size_t RelaxedPlanner::threats(ActionId a, const RelaxedPlanResult& acts) const {
  const GroundAction& cand = task_.action(a);
  std::size_t n = 0;
  for (ActionId b : acts.actions)
    for (FactId p : task_.action(b).pre) {
      bool is_supported = init_.test(p) || (acts.achieved.size() > p && acts.achieved.test(p));
      if (is_supported && std::binary_search(cand.del.begin(), cand.del.end(), p)) ++n;
    }
  return n;
}

ActionId RelaxedPlanner::best_action(FactId g, const RelaxedPlanResult& acts) const {
  const ActionId none = static_cast<ActionId>(-1);
  ActionId best = none;
  int best_level = kUnreachableLevel;
  std::size_t best_threats = 0;
  for (ActionId a : task_.achievers(g)) {
    int lvl = action_level_[a];
    if (lvl == kUnreachableLevel) continue;
    if (best != none && lvl > best_level) continue;
    std::size_t t = threats(a, acts);
    bool better = best == none || lvl < best_level || t < best_threats ||
                  (t == best_threats &&
                   task_.action(a).step.to_string() < task_.action(best).step.to_string());
    if (better) {
      best = a;
      best_level = lvl;
      best_threats = t;
    }
  }
  if (best == none) throw Unreachable(task_.fact_name(g));
  return best;
}

void RelaxedPlanner::extend(const FactSet& goals, RelaxedPlanResult& acts) const {
  if (acts.achieved.size() != task_.num_facts()) acts.achieved = task_.empty_set();
  FactSet open = goals - init_;
  for (;;) {
    FactSet todo = open - acts.achieved;
    if (todo.none()) return;
    // Hardest open fact first; ties by name.
    FactId g = 0;
    bool have = false;
    for (auto f = todo.find_first(); f != FactSet::npos; f = todo.find_next(f)) {
      auto id = static_cast<FactId>(f);
      if (!have || fact_level_[id] > fact_level_[g] ||
          (fact_level_[id] == fact_level_[g] && task_.fact_name(id) < task_.fact_name(g))) {
        g = id;
        have = true;
      }
    }
    if (fact_level_[g] == kUnreachableLevel) throw Unreachable(task_.fact_name(g));
    ActionId best = best_action(g, acts);
    FactSet pre = task_.empty_set();
    for (FactId p : task_.action(best).pre) pre.set(p);
    extend(pre, acts);
    if (!acts.contains(best)) {
      acts.actions.push_back(best);
      for (FactId f : task_.action(best).add) acts.achieved.set(f);
    }
  }
}

RelaxedPlanResult relaxed_plan(const Task& task, const FactSet& goals, const FactSet& init,
                               RelaxedPlanResult seed) {
  RelaxedPlanner planner(task, init);
  planner.extend(goals, seed);
  return seed;
}

ActionId best_action(const Task& task, FactId g, const FactSet& init, const RelaxedPlanResult& acts) {
  RelaxedPlanner planner(task, init);
  return planner.best_action(g, acts);
}

double EvaluationResult::cost() const {
  return unreachable ? kInfiniteCost : static_cast<double>(repair.size());
}

EvaluationResult evaluate_plan(const Task& task, const Plan& plan, double climit) {
  EvaluationResult result;
  result.repair.achieved = task.empty_set();
  FactSet state = task.init();

  auto repair = [&](const FactSet& wanted) {
    try {
      RelaxedPlanner(task, state).extend(wanted, result.repair);
    } catch (const Unreachable&) {
      result.unreachable = true;
      result.truncated = true;
    }
  };

  for (std::size_t i = 0; i < plan.steps.size(); ++i) {
    GroundAction a = task.instantiate(plan.steps[i]);
    FactSet pre = task.empty_set();
    bool flawed = false;
    for (FactId f : a.pre) {
      pre.set(f);
      if (!state.test(f)) {
        result.unsupported.push_back({i, f});
        flawed = true;
      }
    }
    if (flawed) {
      repair(pre);
      if (result.unreachable) return result;
      if (static_cast<double>(result.repair.size()) > climit) {
        result.truncated = true;
        return result;
      }
    }
    state = oak::apply(state, a);
  }
  const FactSet& goals = task.goals();
  bool missing = false;
  for (auto g = goals.find_first(); g != FactSet::npos; g = goals.find_next(g))
    if (!state.test(g)) {
      result.unsupported.push_back({EvaluationResult::kGoal, static_cast<FactId>(g)});
      missing = true;
    }
  if (missing) repair(goals);
  if (static_cast<double>(result.repair.size()) > climit) result.truncated = true;
  return result;
}

}  // namespace oak
