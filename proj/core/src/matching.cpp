#include "oak/matching.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <set>
#include <tuple>

#include "oak/assignment.hpp"
#include "oak/errors.hpp"

namespace oak {

// Mappings and similarities

bool ObjectMapping::injective() const {
  std::set<std::string> seen;
  for (const auto& [_, to] : pairs)
    if (!seen.insert(to).second) return false;
  return true;
}

const std::string& ObjectMapping::operator()(const std::string& object) const {
  auto it = pairs.find(object);
  if (it == pairs.end()) throw UnmappedObject(object);
  return it->second;
}

std::string ObjectMapping::to_string() const {
  std::string out = "{";
  for (const auto& [from, to] : pairs) {
    if (out.size() > 1) out += ", ";
    out += from + "->" + to;
  }
  return out + "}";
}

std::vector<Fact> map_facts(const ObjectMapping& mu, const std::vector<Fact>& facts) {
  std::vector<Fact> out;
  out.reserve(facts.size());
  for (const auto& f : facts) {
    Fact g{f.predicate, {}};
    for (const auto& a : f.args) g.args.push_back(mu(a));
    out.push_back(std::move(g));
  }
  return sorted_unique(std::move(out));
}

Plan map_plan(const ObjectMapping& mu, const Plan& plan) {
  Plan out;
  out.orderings = plan.orderings;
  for (const auto& s : plan.steps) {
    Step t{s.op, {}};
    for (const auto& a : s.args) t.args.push_back(mu(a));
    out.steps.push_back(std::move(t));
  }
  return out;
}

namespace {

std::size_t intersection_size(const std::vector<Fact>& a, const std::vector<Fact>& b) {
  std::size_t n = 0;
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      ++n;
      ++i;
      ++j;
    }
  }
  return n;
}

}  // namespace

SimilarityScore simil(const Problem& case_problem, const Problem& problem, const ObjectMapping& mu) {
  const auto goals = map_facts(mu, case_problem.goals());
  const auto init = map_facts(mu, case_problem.init());
  SimilarityScore s;
  s.matched_goals = intersection_size(goals, problem.goals());
  s.matched_inits = intersection_size(init, problem.init());
  const std::size_t denom = problem.goals().size() + init.size();
  s.value = denom == 0 ? 1.0 : static_cast<double>(s.matched_goals + s.matched_inits) / static_cast<double>(denom);
  return s;
}

double complete_simil(const Problem& case_problem, const Problem& problem, const ObjectMapping& mu) {
  const auto goals = map_facts(mu, case_problem.goals());
  const auto init = map_facts(mu, case_problem.init());
  const std::size_t g_common = intersection_size(goals, problem.goals());
  const std::size_t i_common = intersection_size(init, problem.init());
  const std::size_t g_union = goals.size() + problem.goals().size() - g_common;
  const std::size_t i_union = init.size() + problem.init().size() - i_common;
  const std::size_t denom = g_union + i_union;
  return denom == 0 ? 1.0 : static_cast<double>(g_common + i_common) / static_cast<double>(denom);
}

// Kernels

namespace {

struct IndexedGraph {
  std::vector<VertexKey> keys;
  std::vector<LabelMultiset> labels;
  std::vector<LabelMultiset> incident;
  std::vector<std::vector<std::size_t>> neighbors;
  // (direction-tagged label, other end, multiplicity) per vertex
  std::vector<std::vector<std::tuple<std::string, std::size_t, std::uint64_t>>> arcs;
  std::vector<std::string> sorts;  // empty for relation vertices
  std::map<VertexKey, std::size_t> index;

  explicit IndexedGraph(const PlanningEncodingGraph& g) {
    for (const auto& [v, l] : g.graph.vertices) {
      index[v] = keys.size();
      keys.push_back(v);
      labels.push_back(l);
      sorts.push_back(v.role == VertexRole::Concept ? g.object_sorts.at(v.name) : std::string());
    }
    incident.resize(keys.size());
    arcs.resize(keys.size());
    std::vector<std::set<std::size_t>> adj(keys.size());
    for (const auto& [e, l] : g.graph.edges) {
      const std::size_t a = index.at(e.first);
      const std::size_t b = index.at(e.second);
      for (const auto& [label, c] : l.entries()) {
        incident[a].add(label + ">", c);
        incident[b].add("<" + label, c);
        arcs[a].emplace_back(label + ">", b, c);
        arcs[b].emplace_back("<" + label, a, c);
      }
      if (a != b) {
        adj[a].insert(b);
        adj[b].insert(a);
      }
    }
    for (const auto& s : adj) neighbors.emplace_back(s.begin(), s.end());
  }

  bool compatible(std::size_t i, const IndexedGraph& o, std::size_t j) const {
    if (keys[i].role != o.keys[j].role) return false;
    if (keys[i].role == VertexRole::Concept) return sorts[i] == o.sorts[j];
    return keys[i].name == o.keys[j].name;
  }
};

double base_kernel(const IndexedGraph& a, std::size_t i, const IndexedGraph& b, std::size_t j) {
  if (!a.compatible(i, b, j)) return 0.0;
  return static_cast<double>(a.labels[i].overlap(b.labels[j]) + a.incident[i].overlap(b.incident[j]));
}

using NodeKernel = std::function<double(std::size_t, std::size_t)>;

// Kernel values are sums of multiset overlaps, scaled by γ for the
// neighbourhood term; differences below this are treated as ties.
constexpr double kTieBonus = 1e-6;

// Colour refinement run jointly on both graphs, so equal colours mean equal
// refined neighbourhoods. Whenever a colour class still holds several
// concepts on some side, its first case and problem concepts are given a
// fresh shared colour and refinement resumes. The result only breaks ties
// between equally good assignments.
struct JointColours {
  std::vector<std::size_t> a, b;
};

JointColours refine_colours(const IndexedGraph& ga, const IndexedGraph& gb) {
  JointColours col;
  {
    std::map<std::tuple<int, std::string, std::string, std::vector<std::pair<std::string, std::uint64_t>>>, std::size_t>
        ids;
    auto initial = [&](const IndexedGraph& g, std::size_t i) {
      const auto& k = g.keys[i];
      const std::string name = k.role == VertexRole::Concept ? std::string() : k.name;
      const auto& e = g.labels[i].entries();
      auto key = std::make_tuple(static_cast<int>(k.role), g.sorts[i], name,
                                 std::vector<std::pair<std::string, std::uint64_t>>(e.begin(), e.end()));
      return ids.emplace(key, ids.size()).first->second;
    };
    for (std::size_t i = 0; i < ga.keys.size(); ++i) col.a.push_back(initial(ga, i));
    for (std::size_t j = 0; j < gb.keys.size(); ++j) col.b.push_back(initial(gb, j));
  }
  auto classes = [&] {
    std::set<std::size_t> s(col.a.begin(), col.a.end());
    s.insert(col.b.begin(), col.b.end());
    return s.size();
  };
  auto refine = [&] {
    for (std::size_t before = classes();;) {
      using Signature = std::pair<std::size_t, std::vector<std::tuple<std::string, std::size_t, std::uint64_t>>>;
      std::map<Signature, std::size_t> ids;
      auto next = [&](const IndexedGraph& g, const std::vector<std::size_t>& c, std::size_t i) {
        Signature sig{c[i], {}};
        for (const auto& [label, other, mult] : g.arcs[i]) sig.second.emplace_back(label, c[other], mult);
        std::sort(sig.second.begin(), sig.second.end());
        return ids.emplace(std::move(sig), ids.size()).first->second;
      };
      std::vector<std::size_t> na, nb;
      for (std::size_t i = 0; i < ga.keys.size(); ++i) na.push_back(next(ga, col.a, i));
      for (std::size_t j = 0; j < gb.keys.size(); ++j) nb.push_back(next(gb, col.b, j));
      col.a = std::move(na);
      col.b = std::move(nb);
      const std::size_t after = classes();
      if (after == before) return;
      before = after;
    }
  };
  refine();
  for (;;) {
    std::map<std::size_t, std::pair<std::vector<std::size_t>, std::vector<std::size_t>>> members;
    for (std::size_t i = 0; i < ga.keys.size(); ++i)
      if (ga.keys[i].role == VertexRole::Concept) members[col.a[i]].first.push_back(i);
    for (std::size_t j = 0; j < gb.keys.size(); ++j)
      if (gb.keys[j].role == VertexRole::Concept) members[col.b[j]].second.push_back(j);
    // vertices are in key order, so the first ambiguous case concept is well defined
    std::optional<std::pair<std::size_t, std::size_t>> pick;
    for (const auto& [c, m] : members) {
      const auto& [in_a, in_b] = m;
      if (in_a.empty() || in_b.empty() || (in_a.size() == 1 && in_b.size() == 1)) continue;
      if (!pick || in_a.front() < pick->first) pick = std::make_pair(in_a.front(), in_b.front());
    }
    if (!pick) break;
    const std::size_t fresh =
        std::max(*std::max_element(col.a.begin(), col.a.end()), *std::max_element(col.b.begin(), col.b.end())) + 1;
    col.a[pick->first] = fresh;
    col.b[pick->second] = fresh;
    refine();
  }
  return col;
}

// Assignment on a weight matrix, then 2-swaps that keep the value and move
// rows toward lexicographically smaller columns.
std::vector<int> assign_with_ties(const std::vector<std::vector<double>>& w) {
  auto result = max_weight_assignment(w).row_to_col;
  const double eps = 1e-12;
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t r = 0; r < result.size(); ++r)
      for (std::size_t s = r + 1; s < result.size(); ++s) {
        int cr = result[r], cs = result[s];
        if (cr < 0 || cs < 0 || cr < cs) continue;
        const auto ur = static_cast<std::size_t>(cr), us = static_cast<std::size_t>(cs);
        if (std::abs(w[r][us] + w[s][ur] - w[r][ur] - w[s][us]) < eps) {
          std::swap(result[r], result[s]);
          changed = true;
        }
      }
  }
  return result;
}

// Value of the graph assignment under `k`, with the concept mapping it induces.
// Among assignments of equal value, pairs with equal joint colours win.
KernelMatch assign_graphs(const IndexedGraph& a, const IndexedGraph& b, const NodeKernel& k) {
  KernelMatch m;
  for (std::size_t i = 0; i < a.keys.size(); ++i) {
    if (a.keys[i].role == VertexRole::Concept) continue;
    auto it = b.index.find(a.keys[i]);
    if (it != b.index.end()) m.score += k(i, it->second);
  }
  const JointColours colours = refine_colours(a, b);
  std::map<std::string, std::pair<std::vector<std::size_t>, std::vector<std::size_t>>> by_sort;
  for (std::size_t i = 0; i < a.keys.size(); ++i)
    if (a.keys[i].role == VertexRole::Concept) by_sort[a.sorts[i]].first.push_back(i);
  for (std::size_t j = 0; j < b.keys.size(); ++j)
    if (b.keys[j].role == VertexRole::Concept) by_sort[b.sorts[j]].second.push_back(j);
  for (const auto& [sort, sides] : by_sort) {
    const auto& [rows, cols] = sides;
    if (rows.empty() || cols.empty()) continue;
    std::vector<std::vector<double>> w(rows.size(), std::vector<double>(cols.size()));
    for (std::size_t r = 0; r < rows.size(); ++r)
      for (std::size_t c = 0; c < cols.size(); ++c) w[r][c] = k(rows[r], cols[c]);
    // The colour bonus sums to less than the smallest kernel step it could
    // override, so only ties are affected.
    const double bonus = kTieBonus / static_cast<double>(rows.size() + 1);
    auto tied = w;
    for (std::size_t r = 0; r < rows.size(); ++r)
      for (std::size_t c = 0; c < cols.size(); ++c)
        if (colours.a[rows[r]] == colours.b[cols[c]]) tied[r][c] += bonus;
    auto assigned = assign_with_ties(tied);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (assigned[r] < 0) continue;
      const auto c = static_cast<std::size_t>(assigned[r]);
      m.score += w[r][c];
      m.mapping.pairs[a.keys[rows[r]].name] = b.keys[cols[c]].name;
    }
  }
  return m;
}

double self_value(const IndexedGraph& g, const NodeKernel& k) {
  double v = 0.0;
  for (std::size_t i = 0; i < g.keys.size(); ++i) v += k(i, i);
  return v;
}

double normalise(double cross, double self_a, double self_b) {
  const double denom = std::max(self_a, self_b);
  if (denom <= 0.0) return self_a == self_b ? 1.0 : 0.0;
  return std::clamp(cross / denom, 0.0, 1.0);
}

// Best pairing of neighbours under the base kernel.
double neighbor_pairing(const IndexedGraph& a, std::size_t i, const IndexedGraph& b, std::size_t j) {
  const auto& na = a.neighbors[i];
  const auto& nb = b.neighbors[j];
  if (na.empty() || nb.empty()) return 0.0;
  std::vector<std::vector<double>> w(na.size(), std::vector<double>(nb.size()));
  for (std::size_t r = 0; r < na.size(); ++r)
    for (std::size_t c = 0; c < nb.size(); ++c) w[r][c] = base_kernel(a, na[r], b, nb[c]);
  return max_weight_assignment(w).value;
}

double neighbor_self(const IndexedGraph& g, std::size_t i) {
  double v = 0.0;
  for (std::size_t n : g.neighbors[i]) v += base_kernel(g, n, g, n);
  return v;
}

}  // namespace

KernelMatch kernel_base(const PlanningEncodingGraph& case_graph, const PlanningEncodingGraph& problem_graph) {
  const IndexedGraph a(case_graph), b(problem_graph);
  KernelMatch m = assign_graphs(a, b, [&](std::size_t i, std::size_t j) { return base_kernel(a, i, b, j); });
  const double sa = self_value(a, [&](std::size_t i, std::size_t) { return base_kernel(a, i, a, i); });
  const double sb = self_value(b, [&](std::size_t i, std::size_t) { return base_kernel(b, i, b, i); });
  m.score = normalise(m.score, sa, sb);
  return m;
}

KernelMatch kernel_neighborhood(const PlanningEncodingGraph& case_graph, const PlanningEncodingGraph& problem_graph,
                                double gamma) {
  const IndexedGraph a(case_graph), b(problem_graph);
  auto k = [&](std::size_t i, std::size_t j) {
    const double base = base_kernel(a, i, b, j);
    if (base == 0.0 && !a.compatible(i, b, j)) return 0.0;
    return gamma == 0.0 ? base : base + gamma * neighbor_pairing(a, i, b, j);
  };
  KernelMatch m = assign_graphs(a, b, k);
  auto self = [&](const IndexedGraph& g) {
    return self_value(g, [&](std::size_t i, std::size_t) {
      return base_kernel(g, i, g, i) + gamma * neighbor_self(g, i);
    });
  };
  m.score = normalise(m.score, self(a), self(b));
  return m;
}

// Mapping completion

std::optional<ObjectMapping> complete_mapping(const Problem& case_problem, const Problem& problem,
                                              ObjectMapping partial) {
  std::set<std::string> constants;
  for (const auto& c : case_problem.domain().constants) {
    constants.insert(c.name);
    partial.pairs[c.name] = c.name;
  }
  std::set<std::string> used;
  for (auto it = partial.pairs.begin(); it != partial.pairs.end();) {
    // Drop pairs that do not respect sorts or reuse a target.
    auto from_sort = case_problem.sort_of(it->first);
    auto to_sort = problem.sort_of(it->second);
    bool keep = constants.count(it->first) ||
                (from_sort && to_sort && *from_sort == *to_sort && !constants.count(it->second) &&
                 used.insert(it->second).second);
    it = keep ? std::next(it) : partial.pairs.erase(it);
  }
  for (const auto& obj : case_problem.own_objects()) {
    if (partial.pairs.count(obj.name)) continue;
    bool found = false;
    for (const auto& cand : problem.own_objects()) {
      if (cand.sort != obj.sort || used.count(cand.name)) continue;
      partial.pairs[obj.name] = cand.name;
      used.insert(cand.name);
      found = true;
      break;
    }
    if (!found) return std::nullopt;
  }
  return partial;
}

std::optional<ObjectMapping> anchored_mapping(const Problem& case_problem, const PlanningEncodingGraph& case_graph,
                                              const Problem& problem, const PlanningEncodingGraph& problem_graph,
                                              const ObjectMapping& anchors, double gamma) {
  ObjectMapping mu;
  std::set<std::string> used;
  for (const auto& [from, to] : anchors.pairs) {
    auto fs = case_problem.sort_of(from);
    auto ts = problem.sort_of(to);
    if (!fs || !ts || *fs != *ts || !used.insert(to).second) return std::nullopt;
    mu.pairs[from] = to;
  }

  // Grow along facts, goals before initial facts, until nothing binds.
  const std::vector<std::pair<const std::vector<Fact>*, const std::vector<Fact>*>> sides = {
      {&case_problem.goals(), &problem.goals()}, {&case_problem.init(), &problem.init()}};
  for (bool grew = true; grew;) {
    grew = false;
    for (const auto& [case_facts, prob_facts] : sides)
      for (const auto& cf : *case_facts) {
        bool any_mapped = false, any_free = false;
        for (const auto& a : cf.args) (mu.pairs.count(a) ? any_mapped : any_free) = true;
        if (!any_mapped || !any_free) continue;
        for (const auto& pf : *prob_facts) {
          if (pf.predicate != cf.predicate) continue;
          std::map<std::string, std::string> bind;
          std::set<std::string> taken;
          bool ok = true;
          for (std::size_t i = 0; ok && i < cf.args.size(); ++i) {
            const auto& from = cf.args[i];
            const auto& to = pf.args[i];
            auto m = mu.pairs.find(from);
            if (m != mu.pairs.end()) {
              ok = m->second == to;
            } else if (auto b = bind.find(from); b != bind.end()) {
              ok = b->second == to;
            } else {
              ok = !used.count(to) && !taken.count(to) && case_problem.sort_of(from) == problem.sort_of(to);
              if (ok) {
                bind[from] = to;
                taken.insert(to);
              }
            }
          }
          if (!ok) continue;
          for (const auto& [f, t] : bind) {
            mu.pairs[f] = t;
            used.insert(t);
          }
          grew = true;
          break;
        }
      }
  }

  // Neighbourhood-kernel assignment over what is still free.
  KernelMatch km = kernel_neighborhood(case_graph, problem_graph, gamma);
  for (const auto& [from, to] : km.mapping.pairs)
    if (!mu.pairs.count(from) && !used.count(to)) {
      mu.pairs[from] = to;
      used.insert(to);
    }
  return complete_mapping(case_problem, problem, std::move(mu));
}

// Exhaustive matching

ExactMatch exact_match(const Problem& case_problem, const Problem& problem) {
  const auto objs = case_problem.own_objects();
  if (objs.size() > kExactMatchLimit)
    throw TooLarge("exact matching limited to " + std::to_string(kExactMatchLimit) + " case objects, got " +
                   std::to_string(objs.size()));
  std::vector<std::vector<std::string>> candidates;
  for (const auto& o : objs) {
    std::vector<std::string> c;
    for (const auto& p : problem.own_objects())
      if (p.sort == o.sort) c.push_back(p.name);
    candidates.push_back(std::move(c));
  }
  ExactMatch best;
  ObjectMapping mu;
  for (const auto& c : case_problem.domain().constants) mu.pairs[c.name] = c.name;
  std::set<std::string> used;
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == objs.size()) {
      const double v = simil(case_problem, problem, mu).value;
      if (!best.feasible || v > best.k) {
        best.feasible = true;
        best.k = v;
        best.mapping = mu;
      }
      return;
    }
    for (const auto& c : candidates[i]) {
      if (used.count(c)) continue;
      used.insert(c);
      mu.pairs[objs[i].name] = c;
      rec(i + 1);
      mu.pairs.erase(objs[i].name);
      used.erase(c);
    }
  };
  rec(0);
  return best;
}

}  // namespace oak
