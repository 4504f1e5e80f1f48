#pragma once

// Lifted typed-STRIPS representation: domains, problems and plans. Everything
// here is name based; see task.hpp for the grounded, integer-indexed view.

#include <compare>
#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace oak {

inline constexpr const char* kRootSort = "object";

struct TypedName {
  std::string name;
  std::string sort;

  auto operator<=>(const TypedName&) const = default;
};

struct Predicate {
  std::string name;
  std::vector<std::string> param_sorts;

  std::size_t arity() const { return param_sorts.size(); }
};

/// Ground atom, e.g. (on a b).
struct Fact {
  std::string predicate;
  std::vector<std::string> args;

  auto operator<=>(const Fact&) const = default;
  std::string to_string() const;
};

/// Atom inside an operator schema. Arguments starting with '?' are parameters.
struct AtomTemplate {
  std::string predicate;
  std::vector<std::string> args;

  auto operator<=>(const AtomTemplate&) const = default;
};

struct OperatorSchema {
  std::string name;
  std::vector<TypedName> params;
  std::vector<AtomTemplate> pre;
  std::vector<AtomTemplate> add;
  std::vector<AtomTemplate> del;
};

class Domain {
 public:
  std::string name;
  /// Declared sorts in declaration order, always starting with "object".
  std::vector<std::string> sorts{kRootSort};
  /// Direct supersort of every sort except the root.
  std::map<std::string, std::string> supersort;
  std::vector<TypedName> constants;
  std::vector<Predicate> predicates;
  std::vector<OperatorSchema> operators;

  bool has_sort(const std::string& sort) const;
  /// True when `sort` equals `ancestor` or lies below it.
  bool is_subsort(const std::string& sort, const std::string& ancestor) const;
  const Predicate* find_predicate(const std::string& name) const;
  const OperatorSchema* find_operator(const std::string& name) const;

  /// Checks sort references, predicate arities and schema variables.
  /// Throws SortError.
  void check() const;
};

class Problem {
 public:
  Problem() = default;
  /// Builds and checks a problem; facts are sorted and deduplicated.
  /// Throws SortError on undeclared objects, arity or sort mismatches.
  Problem(std::shared_ptr<const Domain> domain, std::string name, std::vector<TypedName> objects,
          std::vector<Fact> init, std::vector<Fact> goals);

  const Domain& domain() const { return *domain_; }
  const std::shared_ptr<const Domain>& domain_ptr() const { return domain_; }
  const std::string& name() const { return name_; }
  /// Problem objects followed by domain constants, sorted by name.
  const std::vector<TypedName>& objects() const { return objects_; }
  const std::vector<Fact>& init() const { return init_; }
  const std::vector<Fact>& goals() const { return goals_; }

  std::optional<std::string> sort_of(const std::string& object) const;
  /// Objects declared in the problem section (domain constants excluded).
  std::vector<TypedName> own_objects() const;
  /// Objects occurring in I or G, sorted by name.
  std::vector<std::string> mentioned_objects() const;

  /// Same domain and objects, different facts.
  Problem with_facts(std::vector<Fact> init, std::vector<Fact> goals) const;
  /// Keeps only the listed objects (domain constants are always kept).
  Problem restricted_to(const std::vector<std::string>& keep, std::vector<Fact> init,
                        std::vector<Fact> goals, std::string name) const;

  void check_fact(const Fact& f) const;

 private:
  std::shared_ptr<const Domain> domain_;
  std::string name_;
  std::vector<TypedName> objects_;
  std::map<std::string, std::string> sort_index_;
  std::vector<Fact> init_;
  std::vector<Fact> goals_;
};

/// One plan step: operator name plus argument objects.
struct Step {
  std::string op;
  std::vector<std::string> args;

  auto operator<=>(const Step&) const = default;
  std::string to_string() const;
};

/// Partially ordered action sequence. The list order is the canonical
/// linearisation; `orderings` holds extra (before, after) constraints.
struct Plan {
  std::vector<Step> steps;
  std::vector<std::pair<std::size_t, std::size_t>> orderings;

  std::size_t size() const { return steps.size(); }
  bool empty() const { return steps.empty(); }
  /// Orderings are consistent with the list order (implies acyclic).
  bool orderings_consistent() const;

  bool operator==(const Plan&) const = default;
};

/// IPC plan format: one "(op a b)" per line, optional "; cost = N" trailer.
std::string format_plan(const Plan& plan, bool with_cost = true);
/// Accepts lines "(op args)" optionally prefixed by "N:" timestamps; ';' starts a comment.
Plan parse_plan(const std::string& text);

std::vector<Fact> sorted_unique(std::vector<Fact> facts);

}  // namespace oak
