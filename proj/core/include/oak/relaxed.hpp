#pragma once

// Delete-relaxed planning: backward relaxed-plan extraction with the
// Bestaction criteria (reachable preconditions, minimal max precondition
// level, minimal threats, then name order) and plan evaluation by simulated
// execution with relaxed repair of unsupported facts.

#include <cstddef>
#include <limits>
#include <vector>

#include "oak/task.hpp"

namespace oak {

inline constexpr double kInfiniteCost = std::numeric_limits<double>::infinity();

struct RelaxedPlanResult {
  /// Insertion order; preconditions' achievers precede their consumers.
  std::vector<ActionId> actions;
  /// ⋃ add(a) over `actions`.
  FactSet achieved;

  std::size_t size() const { return actions.size(); }
  bool contains(ActionId a) const;
};

/// Relaxed reachability levels from one state, computed once and reused by
/// every recursive step of a relaxed-plan extraction.
class RelaxedPlanner {
 public:
  static constexpr int kUnreachableLevel = std::numeric_limits<int>::max();

  RelaxedPlanner(const Task& task, FactSet init);

  const FactSet& init() const { return init_; }
  int level(FactId f) const { return fact_level_[f]; }
  /// max level over the action's preconditions (0 when all hold in INIT).
  int action_level(ActionId a) const { return action_level_[a]; }

  /// Throws Unreachable when no reachable action adds g.
  ActionId best_action(FactId g, const RelaxedPlanResult& acts) const;
  /// Number of supported preconditions of `acts` that `a` deletes.
  std::size_t threats(ActionId a, const RelaxedPlanResult& acts) const;
  /// Extends `acts` until every goal outside INIT is added by some action.
  void extend(const FactSet& goals, RelaxedPlanResult& acts) const;

 private:
  const Task& task_;
  FactSet init_;
  std::vector<int> fact_level_;
  std::vector<int> action_level_;
};

/// RelaxedPlan(G, INIT, A). Throws Unreachable.
RelaxedPlanResult relaxed_plan(const Task& task, const FactSet& goals, const FactSet& init,
                               RelaxedPlanResult seed = {});

ActionId best_action(const Task& task, FactId g, const FactSet& init, const RelaxedPlanResult& acts);

struct EvaluationResult {
  static constexpr std::size_t kGoal = std::numeric_limits<std::size_t>::max();

  struct Unsupported {
    std::size_t step;  // kGoal for an unsatisfied goal
    FactId fact;
  };

  RelaxedPlanResult repair;
  /// |repair| exceeded the cost limit, or some fact was unreachable.
  bool truncated = false;
  bool unreachable = false;
  std::vector<Unsupported> unsupported;

  /// |repair|, or kInfiniteCost when a needed fact is unreachable.
  double cost() const;
};

/// Walks the plan from I; each step with an unsupported precondition extends
/// the repair with RelaxedPlan(Pre(a), CState, repair) and the walk stops once
/// |repair| > climit. Only the real action's effects advance CState. Missing
/// goals are repaired at the end. Steps outside the task's objects or sorts
/// throw SortError.
EvaluationResult evaluate_plan(const Task& task, const Plan& plan, double climit = kInfiniteCost);

}  // namespace oak
