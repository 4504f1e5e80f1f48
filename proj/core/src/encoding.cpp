#include "oak/encoding.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "oak/errors.hpp"

namespace oak {

// LabelMultiset

LabelMultiset::LabelMultiset(std::initializer_list<std::pair<const std::string, std::uint32_t>> init) {
  for (const auto& [label, n] : init) add(label, n);
}

void LabelMultiset::add(const std::string& label, std::uint32_t n) {
  if (n > 0) entries_[label] += n;
}

std::uint32_t LabelMultiset::count(const std::string& label) const {
  auto it = entries_.find(label);
  return it == entries_.end() ? 0 : it->second;
}

std::uint64_t LabelMultiset::size() const {
  std::uint64_t n = 0;
  for (const auto& [_, c] : entries_) n += c;
  return n;
}

LabelMultiset LabelMultiset::join(const LabelMultiset& other) const {
  LabelMultiset out = *this;
  for (const auto& [l, c] : other.entries_) out.add(l, c);
  return out;
}

LabelMultiset LabelMultiset::unite(const LabelMultiset& other) const {
  LabelMultiset out = *this;
  for (const auto& [l, c] : other.entries_) {
    auto& mine = out.entries_[l];
    mine = std::max(mine, c);
  }
  return out;
}

LabelMultiset LabelMultiset::intersect(const LabelMultiset& other) const {
  LabelMultiset out;
  for (const auto& [l, c] : entries_) out.add(l, std::min(c, other.count(l)));
  return out;
}

std::uint64_t LabelMultiset::overlap(const LabelMultiset& other) const {
  std::uint64_t n = 0;
  auto a = entries_.begin();
  auto b = other.entries_.begin();
  while (a != entries_.end() && b != other.entries_.end()) {
    if (a->first < b->first) {
      ++a;
    } else if (b->first < a->first) {
      ++b;
    } else {
      n += std::min(a->second, b->second);
      ++a;
      ++b;
    }
  }
  return n;
}

std::string LabelMultiset::to_string() const {
  std::string out = "{";
  bool first = true;
  for (const auto& [l, c] : entries_) {
    if (!first) out += ", ";
    first = false;
    out += "(" + l + "," + std::to_string(c) + ")";
  }
  return out + "}";
}

// Graphs

std::string VertexKey::to_string() const {
  switch (role) {
    case VertexRole::InitRelation:
      return "I_" + name;
    case VertexRole::GoalRelation:
      return "G_" + name;
    case VertexRole::Concept:
      break;
  }
  return name;
}

void LabeledGraph::add_vertex(const VertexKey& v, const LabelMultiset& label) {
  auto [it, fresh] = vertices.emplace(v, label);
  if (!fresh) it->second = it->second.join(label);
}

void LabeledGraph::add_edge(const VertexKey& from, const VertexKey& to, const LabelMultiset& label) {
  auto [it, fresh] = edges.emplace(EdgeKey{from, to}, label);
  if (!fresh) it->second = it->second.join(label);
}

std::uint64_t LabeledGraph::edge_mass() const {
  std::uint64_t m = 0;
  for (const auto& [_, l] : edges) m += l.size();
  return m;
}

LabeledGraph graph_union(const LabeledGraph& a, const LabeledGraph& b) {
  LabeledGraph out = a;
  for (const auto& [v, l] : b.vertices) out.add_vertex(v, l);
  for (const auto& [e, l] : b.edges) out.add_edge(e.first, e.second, l);
  return out;
}

std::string relation_label(Side side, const std::string& predicate) {
  return (side == Side::Init ? "I_" : "G_") + predicate;
}

std::string edge_label(Side side, const std::string& predicate, std::size_t i, std::size_t j) {
  return relation_label(side, predicate) + "^" + std::to_string(i) + "," + std::to_string(j);
}

std::string label_family(const std::string& label) { return label.substr(0, label.rfind('^')); }

LabeledGraph fact_encoding(const Fact& fact, Side side, std::span<const std::string> arg_sorts) {
  if (arg_sorts.size() != fact.args.size()) throw SortError("sort list does not match " + fact.to_string());
  LabeledGraph g;
  VertexKey rel{side == Side::Init ? VertexRole::InitRelation : VertexRole::GoalRelation, fact.predicate};
  g.add_vertex(rel, {{relation_label(side, fact.predicate), 1}});
  const std::size_t n = fact.args.size();
  // Occurrence-level construction; add_vertex/add_edge merge repeated objects.
  for (std::size_t i = 0; i < n; ++i) g.add_vertex({VertexRole::Concept, fact.args[i]}, {{arg_sorts[i], 1}});
  if (n == 0) return g;
  g.add_edge(rel, {VertexRole::Concept, fact.args[0]}, {{edge_label(side, fact.predicate, 0, 1), 1}});
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      g.add_edge({VertexRole::Concept, fact.args[i]}, {VertexRole::Concept, fact.args[j]},
                 {{edge_label(side, fact.predicate, i + 1, j + 1), 1}});
  return g;
}

std::vector<VertexKey> PlanningEncodingGraph::concept_vertices() const {
  std::vector<VertexKey> out;
  for (const auto& [v, _] : graph.vertices)
    if (v.role == VertexRole::Concept) out.push_back(v);
  return out;
}

std::vector<VertexKey> PlanningEncodingGraph::relation_vertices() const {
  std::vector<VertexKey> out;
  for (const auto& [v, _] : graph.vertices)
    if (v.role != VertexRole::Concept) out.push_back(v);
  return out;
}

PlanningEncodingGraph encode_problem(const Problem& problem, const std::vector<Fact>& init,
                                     const std::vector<Fact>& goals) {
  PlanningEncodingGraph out;
  auto add = [&](const Fact& f, Side side) {
    std::vector<std::string> sorts;
    for (const auto& a : f.args) {
      auto s = problem.sort_of(a);
      if (!s) throw SortError("undeclared object " + a + " in " + f.to_string());
      sorts.push_back(*s);
      out.object_sorts[a] = *s;
    }
    out.graph = graph_union(out.graph, fact_encoding(f, side, sorts));
  };
  for (const auto& f : sorted_unique(init)) add(f, Side::Init);
  for (const auto& f : sorted_unique(goals)) add(f, Side::Goal);
  return out;
}

PlanningEncodingGraph encode_problem(const Problem& problem) {
  return encode_problem(problem, problem.init(), problem.goals());
}

// Degree signatures

DegreeSignature degree_signature(const LabeledGraph& g) {
  std::map<std::string, std::map<VertexKey, std::uint64_t>> degree;
  for (const auto& [e, label] : g.edges)
    for (const auto& [l, c] : label.entries()) {
      auto& fam = degree[label_family(l)];
      fam[e.first] += c;
      fam[e.second] += c;
    }
  DegreeSignature sig;
  sig.edge_mass = g.edge_mass();
  for (auto& [fam, per_vertex] : degree) {
    auto& seq = sig.sequences[fam];
    for (const auto& [_, d] : per_vertex) seq.push_back(d);
    std::sort(seq.begin(), seq.end(), std::greater<>());
  }
  return sig;
}

double ds_similarity(const DegreeSignature& a, const DegreeSignature& b) {
  const std::uint64_t w = std::max(a.edge_mass, b.edge_mass);
  if (w == 0) return a.edge_mass == b.edge_mass && a.sequences.empty() && b.sequences.empty() ? 1.0 : 0.0;
  std::uint64_t twice_bound = 0;
  for (const auto& [fam, sa] : a.sequences) {
    auto it = b.sequences.find(fam);
    if (it == b.sequences.end()) continue;
    const auto& sb = it->second;
    for (std::size_t k = 0; k < std::min(sa.size(), sb.size()); ++k) twice_bound += std::min(sa[k], sb[k]);
  }
  return std::min(1.0, static_cast<double>(twice_bound) / 2.0 / static_cast<double>(w));
}

// Serialization

namespace {

char role_char(VertexRole r) {
  switch (r) {
    case VertexRole::InitRelation:
      return 'I';
    case VertexRole::GoalRelation:
      return 'G';
    case VertexRole::Concept:
      break;
  }
  return 'C';
}

VertexRole role_from(const std::string& s) {
  if (s == "I") return VertexRole::InitRelation;
  if (s == "G") return VertexRole::GoalRelation;
  if (s == "C") return VertexRole::Concept;
  throw LibraryError("bad vertex role " + s);
}

std::string label_text(const LabelMultiset& l) {
  if (l.empty()) return "-";
  std::string out;
  for (const auto& [k, c] : l.entries()) {
    if (!out.empty()) out += ';';
    out += k + "*" + std::to_string(c);
  }
  return out;
}

LabelMultiset label_from(const std::string& s) {
  LabelMultiset l;
  if (s == "-") return l;
  std::istringstream in(s);
  std::string item;
  while (std::getline(in, item, ';')) {
    auto star = item.rfind('*');
    if (star == std::string::npos) throw LibraryError("bad label entry " + item);
    l.add(item.substr(0, star), static_cast<std::uint32_t>(std::stoul(item.substr(star + 1))));
  }
  return l;
}

}  // namespace

std::string serialize_graph(const PlanningEncodingGraph& g) {
  std::ostringstream out;
  out << "graph " << g.graph.vertices.size() << ' ' << g.graph.edges.size() << '\n';
  for (const auto& [v, l] : g.graph.vertices) {
    out << "v " << role_char(v.role) << ' ' << v.name << ' ' << label_text(l);
    if (v.role == VertexRole::Concept) out << ' ' << g.object_sorts.at(v.name);
    out << '\n';
  }
  for (const auto& [e, l] : g.graph.edges)
    out << "e " << role_char(e.first.role) << ' ' << e.first.name << ' ' << role_char(e.second.role) << ' '
        << e.second.name << ' ' << label_text(l) << '\n';
  return out.str();
}

PlanningEncodingGraph parse_graph(const std::string& text) {
  PlanningEncodingGraph g;
  std::istringstream in(text);
  std::string line;
  std::size_t nv = 0, ne = 0;
  bool header = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string tag;
    ls >> tag;
    if (tag == "graph") {
      ls >> nv >> ne;
      header = true;
    } else if (tag == "v") {
      std::string role, name, label, sort;
      ls >> role >> name >> label;
      VertexKey v{role_from(role), name};
      g.graph.vertices[v] = label_from(label);
      if (v.role == VertexRole::Concept) {
        ls >> sort;
        g.object_sorts[name] = sort;
      }
    } else if (tag == "e") {
      std::string r1, n1, r2, n2, label;
      ls >> r1 >> n1 >> r2 >> n2 >> label;
      g.graph.edges[{VertexKey{role_from(r1), n1}, VertexKey{role_from(r2), n2}}] = label_from(label);
    } else {
      throw LibraryError("unexpected graph record: " + line);
    }
  }
  if (!header || g.graph.vertices.size() != nv || g.graph.edges.size() != ne)
    throw LibraryError("graph record count mismatch");
  return g;
}

std::string serialize_signature(const DegreeSignature& s) {
  std::ostringstream out;
  out << "signature " << s.edge_mass << ' ' << s.sequences.size() << '\n';
  for (const auto& [fam, seq] : s.sequences) {
    out << "f " << fam;
    for (auto d : seq) out << ' ' << d;
    out << '\n';
  }
  return out.str();
}

DegreeSignature parse_signature(const std::string& text) {
  DegreeSignature s;
  std::istringstream in(text);
  std::string line;
  std::size_t nf = 0;
  bool header = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string tag;
    ls >> tag;
    if (tag == "signature") {
      ls >> s.edge_mass >> nf;
      header = true;
    } else if (tag == "f") {
      std::string fam;
      ls >> fam;
      auto& seq = s.sequences[fam];
      std::uint64_t d;
      while (ls >> d) seq.push_back(d);
    } else {
      throw LibraryError("unexpected signature record: " + line);
    }
  }
  if (!header || s.sequences.size() != nf) throw LibraryError("signature record count mismatch");
  return s;
}

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace oak
