#pragma once

// The `oak` subcommands as plain functions writing to streams, so tests can
// run them in-process. Each returns the process exit code.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "oak/merge.hpp"
#include "oak/retrieval.hpp"

namespace oak::cli {

enum class Outcome { Solved, QuasiSolution, Unsolved };

const char* to_string(Outcome o);

struct RunReport {
  Outcome outcome = Outcome::Unsolved;
  Plan plan;
  std::optional<CaseId> source;
  Plan retrieved;
  std::size_t differing_actions = 0;  // vs the retrieved plan
  double best_cost = kInfiniteCost;
  double relaxed_cost = kInfiniteCost;
  std::vector<StageTrace> trace;
  std::vector<MergeIteration> merge_iterations;
  std::map<std::string, double> timings_ms;
};

struct SolveOptions {
  std::string domain;
  std::string problem;
  std::optional<std::string> library;
  bool merge = false;
  RetrievalConfig retrieval;
  bool json = false;
  bool timings = false;
  bool record_usage = false;
};

/// Exit code 0 when solved, 2 for a quasi-solution or no plan, 1 on errors.
int cmd_solve(const SolveOptions& opt, std::ostream& out, std::ostream& err);

/// The report alone, for in-process callers. Throws oak::Error.
RunReport solve(const SolveOptions& opt);

struct AddCaseOptions {
  std::string domain;
  std::string problem;
  std::string plan;
  std::string library;
  bool decompose = false;
  double gamma = kDefaultGamma;
  bool json = false;
};

int cmd_add_case(const AddCaseOptions& opt, std::ostream& out, std::ostream& err);

struct MatchOptions {
  std::string domain;
  std::string case_problem;
  std::string problem;
  bool exact = false;
  double gamma = kDefaultGamma;
  bool json = false;
};

int cmd_match(const MatchOptions& opt, std::ostream& out, std::ostream& err);

struct StatsOptions {
  std::string library;
  bool json = false;
};

int cmd_stats(const StatsOptions& opt, std::ostream& out, std::ostream& err);

struct GenerateOptions {
  std::string kind;  // blocks | logistics | tower
  std::uint64_t seed = 1;
  std::size_t size = 4;
  std::optional<std::string> out_dir;
};

int cmd_generate(const GenerateOptions& opt, std::ostream& out, std::ostream& err);

}  // namespace oak::cli
