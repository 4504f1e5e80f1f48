#pragma once

// Combining library subplans into a plan for a new problem, and a simple
// relaxed-plan completion that turns a quasi-solution into a valid plan when
// delete effects do not get in the way.

#include <cstddef>
#include <optional>
#include <vector>

#include "oak/errors.hpp"
#include "oak/retrieval.hpp"

namespace oak {

/// Inserts the block pi_f into pi at two candidate positions: the earliest
/// one where the block's net preconditions hold, and the latest one before
/// the first step that needs `f` unsupported (the end without `f`). Returns
/// the candidate with the lower evaluation cost, the earlier on ties.
Plan merge_plans(const Task& task, const Plan& pi, const Plan& pi_f, std::optional<FactId> f = std::nullopt);

struct MergeIteration {
  Fact fact;
  CaseId case_id = 0;
  double cost_before = 0.0;
  double cost_after = 0.0;
};

struct MergeResult {
  Plan plan;
  double cost = kInfiniteCost;  // evaluation cost of `plan`; 0 means valid
  std::optional<CaseId> seed_case;
  std::vector<MergeIteration> iterations;
  RetrievalResult retrieval;
};

/// Seeds with retrieve(), then repeatedly takes the first unsatisfied fact
/// (goals before preconditions, each in name order) for which some case
/// whose goal unifies with it yields a strictly cheaper merge, and applies
/// the best such merge. Stops when no fact admits one.
MergeResult merge_subplans(const CaseBase& base, const Problem& problem, const RetrievalConfig& config = {});

class IncompleteRepair : public Error {
 public:
  explicit IncompleteRepair(Plan plan)
      : Error("relaxed repair did not produce a valid plan"), plan_(std::move(plan)) {}
  const Plan& plan() const { return plan_; }

 private:
  Plan plan_;
};

/// Inserts the relaxed repair actions evaluate_plan adds at each flaw right
/// before the flawed step (at the end for missing goals), and repeats while
/// that lowers the evaluation cost. Throws IncompleteRepair carrying the
/// cheapest plan reached when the result does not validate.
Plan repair_completion(const Task& task, const Plan& plan);

/// Multiset symmetric difference of the two plans' actions.
std::size_t differing_actions(const Plan& a, const Plan& b);

}  // namespace oak
