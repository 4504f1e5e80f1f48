#pragma once

// Multiset-labeled directed graphs and the Planning Encoding Graph of a
// problem: one relation vertex per (side, predicate), one concept vertex per
// object, and for every fact p(c1..cn) the edges [P,c1] and [ci,cj] (i<j)
// labeled P^{0,1} and P^{i,j}.

#include <compare>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "oak/strips.hpp"

namespace oak {

class LabelMultiset {
 public:
  LabelMultiset() = default;
  LabelMultiset(std::initializer_list<std::pair<const std::string, std::uint32_t>> init);

  void add(const std::string& label, std::uint32_t n = 1);
  std::uint32_t count(const std::string& label) const;
  /// Total multiplicity |λ|.
  std::uint64_t size() const;
  bool empty() const { return entries_.empty(); }
  const std::map<std::string, std::uint32_t>& entries() const { return entries_; }

  /// Multiset sum (⊎).
  LabelMultiset join(const LabelMultiset& other) const;
  /// Max of multiplicities (∪).
  LabelMultiset unite(const LabelMultiset& other) const;
  /// Min of multiplicities (∩).
  LabelMultiset intersect(const LabelMultiset& other) const;
  /// |this ∩ other| without materialising it.
  std::uint64_t overlap(const LabelMultiset& other) const;

  std::string to_string() const;

  bool operator==(const LabelMultiset&) const = default;

 private:
  std::map<std::string, std::uint32_t> entries_;
};

enum class Side { Init, Goal };

enum class VertexRole { InitRelation = 0, GoalRelation = 1, Concept = 2 };

struct VertexKey {
  VertexRole role;
  std::string name;  // predicate for relation vertices, object for concepts

  auto operator<=>(const VertexKey&) const = default;
  std::string to_string() const;
};

using EdgeKey = std::pair<VertexKey, VertexKey>;

struct LabeledGraph {
  std::map<VertexKey, LabelMultiset> vertices;
  std::map<EdgeKey, LabelMultiset> edges;

  /// Joins the label when the vertex exists already.
  void add_vertex(const VertexKey& v, const LabelMultiset& label);
  void add_edge(const VertexKey& from, const VertexKey& to, const LabelMultiset& label);

  /// |V| + |E|.
  std::size_t size() const { return vertices.size() + edges.size(); }
  /// Σ_e |λ(e)|.
  std::uint64_t edge_mass() const;

  bool operator==(const LabeledGraph&) const = default;
};

/// Shared vertices and edges get joined labels; the rest keep theirs.
LabeledGraph graph_union(const LabeledGraph& a, const LabeledGraph& b);

/// Relation vertex label, e.g. "I_on".
std::string relation_label(Side side, const std::string& predicate);
/// Edge label, e.g. "I_on^1,2".
std::string edge_label(Side side, const std::string& predicate, std::size_t i, std::size_t j);
/// Edge-label family: the label without its positional superscript.
std::string label_family(const std::string& edge_label);

/// Encoding graph of one fact. `arg_sorts[i]` is the sort of fact.args[i].
/// Repeated objects collapse into one vertex, joining labels of parallel edges.
LabeledGraph fact_encoding(const Fact& fact, Side side, std::span<const std::string> arg_sorts);

struct PlanningEncodingGraph {
  LabeledGraph graph;
  std::map<std::string, std::string> object_sorts;  // concept vertices only

  std::vector<VertexKey> concept_vertices() const;
  std::vector<VertexKey> relation_vertices() const;

  bool operator==(const PlanningEncodingGraph&) const = default;
};

PlanningEncodingGraph encode_problem(const Problem& problem, const std::vector<Fact>& init,
                                     const std::vector<Fact>& goals);
PlanningEncodingGraph encode_problem(const Problem& problem);

/// Per edge-label family, the label-weighted degrees (in + out) of the
/// vertices touching that family, sorted descending.
struct DegreeSignature {
  std::map<std::string, std::vector<std::uint64_t>> sequences;
  std::uint64_t edge_mass = 0;

  bool operator==(const DegreeSignature&) const = default;
};

DegreeSignature degree_signature(const LabeledGraph& g);
inline DegreeSignature degree_signature(const PlanningEncodingGraph& g) { return degree_signature(g.graph); }

/// Σ_j ½·Σ_k min(a_k, b_k) / max(W1, W2): an upper bound on the normalised
/// label-weighted common edge subgraph. 1 for two empty graphs.
double ds_similarity(const DegreeSignature& a, const DegreeSignature& b);

// Canonical text forms, one record per line in key order.
std::string serialize_graph(const PlanningEncodingGraph& g);
PlanningEncodingGraph parse_graph(const std::string& text);
std::string serialize_signature(const DegreeSignature& s);
DegreeSignature parse_signature(const std::string& text);

/// 64-bit FNV-1a, stable across platforms.
std::uint64_t fnv1a(const std::string& bytes);

}  // namespace oak
