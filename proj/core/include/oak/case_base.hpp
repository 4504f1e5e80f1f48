#pragma once

// Plan library: cases with precomputed retrieval structures, the insertion
// policy that keeps only the shortest plan per perfectly matching problem,
// and library growth by causal-link decomposition of solution plans.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "oak/encoding.hpp"
#include "oak/matching.hpp"
#include "oak/strips.hpp"
#include "oak/task.hpp"

namespace oak {

using CaseId = std::uint64_t;

struct UsageStats {
  std::uint32_t attempts = 0;
  std::uint32_t successes = 0;

  double success_rate() const { return attempts == 0 ? 0.0 : static_cast<double>(successes) / attempts; }
  bool operator==(const UsageStats&) const = default;
};

enum class CaseKind { Solution, Subplan };

struct PlanningCase {
  CaseId id = 0;
  CaseKind kind = CaseKind::Solution;
  std::optional<CaseId> parent_id;
  Problem problem;  // initial state already restricted to relevant facts
  Plan solution;
  PlanningEncodingGraph encoding;
  DegreeSignature signature;
  UsageStats usage;

  /// Object count per sort, e.g. {"block": 3}.
  std::map<std::string, std::size_t> sort_counts() const;
};

class CaseBase {
 public:
  static constexpr const char* kFormatHeader = "OAKLIB v1";

  /// In-memory library; the domain is fixed by the first stored case.
  CaseBase() = default;
  explicit CaseBase(std::shared_ptr<const Domain> domain) : domain_(std::move(domain)) {}

  /// Opens (or creates on first write) a library directory.
  /// Throws LibraryError on malformed or inconsistent files.
  static CaseBase open(const std::filesystem::path& dir);

  const std::vector<PlanningCase>& cases() const { return cases_; }
  std::size_t size() const { return cases_.size(); }
  bool empty() const { return cases_.empty(); }
  const PlanningCase* find(CaseId id) const;
  const std::shared_ptr<const Domain>& domain() const { return domain_; }
  const std::optional<std::filesystem::path>& directory() const { return dir_; }

  /// Stores a case as given (no dominance check) and returns its id.
  /// Throws LibraryError when the problem's domain differs from the library's.
  CaseId add(Problem problem, Plan solution, CaseKind kind = CaseKind::Solution,
             std::optional<CaseId> parent = std::nullopt);
  void remove(CaseId id);
  void record_usage(CaseId id, bool success);

  /// Rewrites every file; used after bulk in-memory construction.
  void save_to(const std::filesystem::path& dir);

 private:
  void persist_case(const PlanningCase& c) const;
  void persist_index() const;
  void persist_domain() const;
  void unpersist_case(CaseId id) const;

  std::shared_ptr<const Domain> domain_;
  std::vector<PlanningCase> cases_;
  CaseId next_id_ = 1;
  std::optional<std::filesystem::path> dir_;
};

std::string serialize_case(const PlanningCase& c);
PlanningCase parse_case(const std::string& text, std::shared_ptr<const Domain> domain);

// Causal structure of a valid plan

struct CausalLink {
  static constexpr std::size_t kInit = std::numeric_limits<std::size_t>::max();
  static constexpr std::size_t kGoal = std::numeric_limits<std::size_t>::max();

  std::size_t producer;  // step index or kInit
  FactId fact;
  std::size_t consumer;  // step index or kGoal

  bool operator==(const CausalLink&) const = default;
};

struct CausalLinkSet {
  std::vector<CausalLink> links;

  /// Links consumed by `consumer` (a step index or CausalLink::kGoal).
  std::vector<CausalLink> into(std::size_t consumer) const;
};

/// Every precondition and goal linked to its last adder with no deleter in
/// between, or to INIT. Throws InvalidPlan when something is unsupported.
CausalLinkSet causal_links(const Task& task, const Plan& plan);

struct Subcase {
  Problem problem;
  Plan plan;
  std::vector<std::size_t> steps;  // indices into the source plan
};

/// The steps that support `targets` at the end of the plan, found by
/// back-chaining over `links`, in original order. The subproblem keeps the
/// initial facts those steps (or the targets themselves) consume.
Subcase goal_subplan(const Task& task, const Plan& plan, const CausalLinkSet& links,
                     const std::vector<FactId>& targets);
Subcase goal_subplan(const Task& task, const Plan& plan, const CausalLinkSet& links, FactId target);

// Insertion policy

inline constexpr std::size_t kMinSubplanSize = 5;
inline constexpr std::size_t kMaxSubplanSize = 200;

struct InsertOutcome {
  bool inserted = false;
  std::optional<CaseId> id;
  std::vector<CaseId> replaced;
  std::optional<CaseId> dominated_by;
};

/// Stores (I_π, G) with π unless a case matches completely with a plan no
/// longer than π; matching cases with longer plans are removed. Throws
/// InvalidPlan.
InsertOutcome insert_case(CaseBase& base, const Problem& problem, const Plan& plan, double gamma = kDefaultGamma);

/// Same policy for an already-reduced subproblem, skipping plans outside
/// [kMinSubplanSize, kMaxSubplanSize].
InsertOutcome check_and_insert(CaseBase& base, const Problem& subproblem, const Plan& subplan,
                               std::optional<CaseId> parent = std::nullopt, double gamma = kDefaultGamma);

struct UpdateReport {
  std::size_t candidates = 0;
  std::size_t inserted = 0;
  std::vector<std::vector<Fact>> candidate_goals;
  std::vector<std::size_t> candidate_sizes;  // subplan lengths
  std::vector<InsertOutcome> outcomes;
};

/// Decomposes a valid plan into subcases: one per goal, one per fact in
/// `extra` that holds at the end, and one per connected group of goals whose
/// subplans share a step. Each goes through check_and_insert.
UpdateReport update_library(CaseBase& base, const Problem& problem, const Plan& plan,
                            const std::vector<Fact>& extra = {}, std::optional<CaseId> parent = std::nullopt,
                            double gamma = kDefaultGamma);

}  // namespace oak
