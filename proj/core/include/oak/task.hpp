#pragma once

// Grounded view of a Problem. Every well-sorted atom over the problem's objects
// gets a dense FactId; fact sets are bitsets over that universe. Ground actions
// are enumerated once, dropping only bindings whose static preconditions are
// false in the initial state (a static fact is never added or deleted, so such
// an action can never be supported). Plan steps outside that table are
// instantiated on demand.

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <boost/dynamic_bitset.hpp>

#include "oak/strips.hpp"

namespace oak {

using FactId = std::uint32_t;
using ActionId = std::uint32_t;
using FactSet = boost::dynamic_bitset<>;

struct GroundAction {
  Step step;
  std::vector<FactId> pre;
  std::vector<FactId> add;
  /// Never overlaps `add`; an atom both added and deleted ends up true.
  std::vector<FactId> del;

  const std::string& op() const { return step.op; }
};

class Task {
 public:
  explicit Task(Problem problem);

  const Problem& problem() const { return *problem_; }
  std::shared_ptr<const Problem> problem_ptr() const { return problem_; }

  std::size_t num_facts() const { return facts_.size(); }
  const Fact& fact(FactId id) const { return facts_[id]; }
  const std::string& fact_name(FactId id) const { return fact_names_[id]; }
  std::optional<FactId> find_fact(const Fact& f) const;
  /// Throws SortError when `f` is not a well-sorted atom of this task.
  FactId fact_id(const Fact& f) const;

  std::span<const GroundAction> actions() const { return actions_; }
  const GroundAction& action(ActionId id) const { return actions_[id]; }
  /// Ids of grounded actions adding the fact, in action order.
  std::span<const ActionId> achievers(FactId f) const { return achievers_[f]; }
  std::optional<ActionId> find_action(const Step& step) const;
  /// Ground a step, whether or not it is in the action table.
  /// Throws SortError for unknown operators, wrong arity or ill-sorted args.
  GroundAction instantiate(const Step& step) const;

  const FactSet& init() const { return init_; }
  const FactSet& goals() const { return goals_; }
  FactSet empty_set() const { return FactSet(facts_.size()); }

  FactSet to_set(const std::vector<Fact>& facts) const;
  std::vector<Fact> to_facts(const FactSet& set) const;

 private:
  void enumerate_atoms();
  void ground_actions();

  std::shared_ptr<const Problem> problem_;
  std::vector<Fact> facts_;
  std::vector<std::string> fact_names_;
  std::map<Fact, FactId> fact_index_;
  std::vector<GroundAction> actions_;
  std::map<Step, ActionId> action_index_;
  std::vector<std::vector<ActionId>> achievers_;
  FactSet init_;
  FactSet goals_;
};

/// (state \ del(a)) ∪ add(a); applicability is not checked.
FactSet apply(const FactSet& state, const GroundAction& a);

bool supported(const FactSet& state, const GroundAction& a);

struct ValidationReport {
  struct Flaw {
    std::size_t step;
    FactId fact;
  };
  std::vector<Flaw> unsupported;
  std::vector<FactId> unsatisfied_goals;
  FactSet final_state;

  bool valid() const { return unsupported.empty() && unsatisfied_goals.empty(); }
};

/// Simulates the canonical linearisation from I, recording every
/// unsupported precondition occurrence and every goal missing at the end.
ValidationReport validate(const Task& task, const Plan& plan);

/// I ∩ ⋃ pre(a) over the plan's steps.
FactSet relevant_init_facts(const Task& task, const Plan& plan);

}  // namespace oak
