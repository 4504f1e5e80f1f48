#pragma once

// Case retrieval: a degree-signature screen against the relaxed problem,
// two kernel stages over the full problem graph, then a cost-bounded
// evaluation of each surviving case's mapped plan.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "oak/case_base.hpp"
#include "oak/relaxed.hpp"

namespace oak {

struct RetrievalConfig {
  double limit = 0.1;            // window below the best score kept by each stage
  std::size_t screen_cap = 700;  // most cases passed on by the signature screen
  double alpha_g = 1.0;          // weight of generating from scratch
  double gamma = kDefaultGamma;
  bool exact = false;  // exhaustive matching for cases within kExactMatchLimit
};

struct StageTrace {
  std::string stage;
  std::size_t candidates = 0;
  double best = 0.0;
};

struct CandidateRecord {
  CaseId id = 0;
  double ds = 0.0;
  std::optional<double> base;
  std::optional<double> neighborhood;
  std::optional<double> simil;
  std::optional<double> cost;  // evaluation cost, kInfiniteCost when truncated
  ObjectMapping mapping;
};

struct RetrievalResult {
  /// The relaxed plan for the problem from I, as steps.
  Plan relaxed;
  double relaxed_cost = kInfiniteCost;
  /// Retrieved plan already mapped to the problem's objects; empty when no
  /// case beats planning from scratch.
  Plan plan;
  std::optional<CaseId> case_id;
  ObjectMapping mapping;
  double best_cost = kInfiniteCost;  // cost / simil of the winner, or α_G·|π_R|
  std::vector<StageTrace> trace;
  std::vector<CandidateRecord> candidates;
};

/// The relaxed plan of `task` from I as a plan in extraction order; empty
/// when some goal is unreachable.
Plan relaxed_plan_steps(const Task& task, bool* unreachable = nullptr);

RetrievalResult retrieve(const CaseBase& base, const Problem& problem, const RetrievalConfig& config = {});

/// One line per stage: "stage=ds candidates=12 best=0.9731".
std::string format_trace(const RetrievalResult& r);

}  // namespace oak
