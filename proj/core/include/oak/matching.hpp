#pragma once

// Object matching between a stored case Π' and a new problem Π: the two
// fact-overlap similarities, approximate matching with optimal-assignment
// kernels over Planning Encoding Graphs, and an exhaustive solver for small
// instances.

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "oak/encoding.hpp"
#include "oak/strips.hpp"

namespace oak {

/// μ : case objects -> problem objects.
struct ObjectMapping {
  std::map<std::string, std::string> pairs;

  bool injective() const;
  /// Throws UnmappedObject.
  const std::string& operator()(const std::string& object) const;
  std::string to_string() const;

  bool operator==(const ObjectMapping&) const = default;
};

/// μ applied to every argument; duplicates collapse. Throws UnmappedObject.
std::vector<Fact> map_facts(const ObjectMapping& mu, const std::vector<Fact>& facts);
Plan map_plan(const ObjectMapping& mu, const Plan& plan);

struct SimilarityScore {
  double value = 0.0;
  std::size_t matched_goals = 0;
  std::size_t matched_inits = 0;
};

/// (|μ(G')∩G| + |μ(I')∩I|) / (|G| + |μ(I')|); 1 when both sides are empty.
SimilarityScore simil(const Problem& case_problem, const Problem& problem, const ObjectMapping& mu);
/// (|μ(G')∩G| + |μ(I')∩I|) / (|μ(G')∪G| + |μ(I')∪I|); 1 when both sides are empty.
double complete_simil(const Problem& case_problem, const Problem& problem, const ObjectMapping& mu);

struct KernelMatch {
  double score = 0.0;
  /// Concept vertices of the case graph to concept vertices of the problem graph.
  ObjectMapping mapping;
};

inline constexpr double kDefaultGamma = 0.5;

/// Node kernel: |λ(u)∩λ(v)| + |inc(u)∩inc(v)| where inc is the multiset of
/// direction-tagged incident edge labels. Concepts pair only with concepts of
/// the same sort and relation vertices only with their namesake. The graph
/// value is a maximum-weight assignment solved per sort; the score divides it
/// by the larger self-value.
KernelMatch kernel_base(const PlanningEncodingGraph& case_graph, const PlanningEncodingGraph& problem_graph);

/// As kernel_base with k(u,v) + γ·(best pairing of the neighbours' base kernels).
KernelMatch kernel_neighborhood(const PlanningEncodingGraph& case_graph,
                                const PlanningEncodingGraph& problem_graph, double gamma = kDefaultGamma);

/// Extends `partial` to every object of `case_problem` with unused problem
/// objects of the same sort, in name order. Domain constants map to
/// themselves. nullopt when some sort has too few problem objects.
std::optional<ObjectMapping> complete_mapping(const Problem& case_problem, const Problem& problem,
                                              ObjectMapping partial);

/// Mapping that honours `anchors`, then grows along facts: a case fact with
/// some mapped arguments binds its unmapped ones to the first matching
/// problem fact. Whatever is left goes through a neighbourhood-kernel
/// assignment and finally complete_mapping.
std::optional<ObjectMapping> anchored_mapping(const Problem& case_problem, const PlanningEncodingGraph& case_graph,
                                              const Problem& problem, const PlanningEncodingGraph& problem_graph,
                                              const ObjectMapping& anchors, double gamma = kDefaultGamma);

struct ExactMatch {
  bool feasible = false;  // some injective sort-preserving mapping exists
  double k = 0.0;
  ObjectMapping mapping;
};

inline constexpr std::size_t kExactMatchLimit = 9;

/// Enumerates every injective sort-preserving mapping of the case's own
/// objects and returns the simil maximiser (first in lexicographic order on
/// ties). Throws TooLarge beyond kExactMatchLimit case objects.
ExactMatch exact_match(const Problem& case_problem, const Problem& problem);

}  // namespace oak
