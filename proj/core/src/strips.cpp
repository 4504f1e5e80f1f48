#include "oak/strips.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "oak/errors.hpp"

namespace oak {

ParseError::ParseError(const std::string& what, std::size_t line, std::size_t column)
    : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + what),
      line_(line),
      column_(column) {}

UnsupportedFeature::UnsupportedFeature(std::string feature)
    : Error("unsupported PDDL feature: " + feature), feature_(std::move(feature)) {}

namespace {

std::string paren_join(const std::string& head, const std::vector<std::string>& args) {
  std::string out = "(" + head;
  for (const auto& a : args) {
    out += ' ';
    out += a;
  }
  out += ')';
  return out;
}

}  // namespace

std::string Fact::to_string() const { return paren_join(predicate, args); }
std::string Step::to_string() const { return paren_join(op, args); }

std::vector<Fact> sorted_unique(std::vector<Fact> facts) {
  std::sort(facts.begin(), facts.end());
  facts.erase(std::unique(facts.begin(), facts.end()), facts.end());
  return facts;
}

// Domain

bool Domain::has_sort(const std::string& sort) const {
  return std::find(sorts.begin(), sorts.end(), sort) != sorts.end();
}

bool Domain::is_subsort(const std::string& sort, const std::string& ancestor) const {
  std::string cur = sort;
  for (std::size_t guard = 0; guard <= sorts.size(); ++guard) {
    if (cur == ancestor) return true;
    auto it = supersort.find(cur);
    if (it == supersort.end()) return false;
    cur = it->second;
  }
  return false;
}

const Predicate* Domain::find_predicate(const std::string& n) const {
  for (const auto& p : predicates)
    if (p.name == n) return &p;
  return nullptr;
}

const OperatorSchema* Domain::find_operator(const std::string& n) const {
  for (const auto& o : operators)
    if (o.name == n) return &o;
  return nullptr;
}

void Domain::check() const {
  for (const auto& [sub, super] : supersort) {
    if (!has_sort(sub) || !has_sort(super)) throw SortError("undeclared sort in hierarchy: " + sub);
    if (is_subsort(super, sub)) throw SortError("cyclic sort hierarchy at " + sub);
  }
  std::set<std::string> names;
  for (const auto& p : predicates) {
    if (!names.insert(p.name).second) throw SortError("duplicate predicate " + p.name);
    for (const auto& s : p.param_sorts)
      if (!has_sort(s)) throw SortError("undeclared sort " + s + " in predicate " + p.name);
  }
  std::map<std::string, std::string> constant_sorts;
  for (const auto& c : constants) {
    if (!has_sort(c.sort)) throw SortError("undeclared sort " + c.sort + " of constant " + c.name);
    constant_sorts[c.name] = c.sort;
  }
  names.clear();
  for (const auto& op : operators) {
    if (!names.insert(op.name).second) throw SortError("duplicate action " + op.name);
    std::map<std::string, std::string> vars;
    for (const auto& p : op.params) {
      if (!has_sort(p.sort)) throw SortError("undeclared sort " + p.sort + " in action " + op.name);
      if (!vars.emplace(p.name, p.sort).second)
        throw SortError("duplicate parameter " + p.name + " in action " + op.name);
    }
    auto check_atom = [&](const AtomTemplate& a) {
      const Predicate* pred = find_predicate(a.predicate);
      if (!pred) throw SortError("undeclared predicate " + a.predicate + " in action " + op.name);
      if (pred->arity() != a.args.size())
        throw SortError("arity mismatch for " + a.predicate + " in action " + op.name);
      for (std::size_t i = 0; i < a.args.size(); ++i) {
        const auto& arg = a.args[i];
        std::string sort;
        if (!arg.empty() && arg[0] == '?') {
          auto it = vars.find(arg);
          if (it == vars.end()) throw SortError("unbound variable " + arg + " in action " + op.name);
          sort = it->second;
        } else {
          auto it = constant_sorts.find(arg);
          if (it == constant_sorts.end())
            throw SortError("undeclared constant " + arg + " in action " + op.name);
          sort = it->second;
        }
        // A parameter may be declared more general than the predicate slot;
        // grounding then filters the bindings.
        if (!is_subsort(sort, pred->param_sorts[i]) && !is_subsort(pred->param_sorts[i], sort))
          throw SortError("sort mismatch for " + arg + " in " + a.predicate + " of action " + op.name);
      }
    };
    for (const auto& a : op.pre) check_atom(a);
    for (const auto& a : op.add) check_atom(a);
    for (const auto& a : op.del) check_atom(a);
  }
}

// Problem

Problem::Problem(std::shared_ptr<const Domain> domain, std::string name,
                 std::vector<TypedName> objects, std::vector<Fact> init, std::vector<Fact> goals)
    : domain_(std::move(domain)), name_(std::move(name)) {
  if (!domain_) throw SortError("problem without domain");
  for (const auto& c : domain_->constants) sort_index_[c.name] = c.sort;
  for (auto& o : objects) {
    if (!domain_->has_sort(o.sort)) throw SortError("undeclared sort " + o.sort + " of object " + o.name);
    auto [it, fresh] = sort_index_.emplace(o.name, o.sort);
    if (!fresh && it->second != o.sort) throw SortError("object " + o.name + " declared twice");
  }
  for (const auto& [n, s] : sort_index_) objects_.push_back({n, s});
  init_ = sorted_unique(std::move(init));
  goals_ = sorted_unique(std::move(goals));
  for (const auto& f : init_) check_fact(f);
  for (const auto& f : goals_) check_fact(f);
}

void Problem::check_fact(const Fact& f) const {
  const Predicate* pred = domain_->find_predicate(f.predicate);
  if (!pred) throw SortError("undeclared predicate " + f.predicate + " in " + f.to_string());
  if (pred->arity() != f.args.size())
    throw SortError("arity mismatch in " + f.to_string() + ": expected " + std::to_string(pred->arity()));
  for (std::size_t i = 0; i < f.args.size(); ++i) {
    auto it = sort_index_.find(f.args[i]);
    if (it == sort_index_.end()) throw SortError("undeclared object " + f.args[i] + " in " + f.to_string());
    if (!domain_->is_subsort(it->second, pred->param_sorts[i]))
      throw SortError("object " + f.args[i] + " of sort " + it->second + " does not fit " +
                      pred->param_sorts[i] + " in " + f.to_string());
  }
}

std::optional<std::string> Problem::sort_of(const std::string& object) const {
  auto it = sort_index_.find(object);
  if (it == sort_index_.end()) return std::nullopt;
  return it->second;
}

std::vector<TypedName> Problem::own_objects() const {
  std::set<std::string> constants;
  for (const auto& c : domain_->constants) constants.insert(c.name);
  std::vector<TypedName> out;
  for (const auto& o : objects_)
    if (!constants.count(o.name)) out.push_back(o);
  return out;
}

std::vector<std::string> Problem::mentioned_objects() const {
  std::set<std::string> seen;
  for (const auto* facts : {&init_, &goals_})
    for (const auto& f : *facts) seen.insert(f.args.begin(), f.args.end());
  return {seen.begin(), seen.end()};
}

Problem Problem::with_facts(std::vector<Fact> init, std::vector<Fact> goals) const {
  return Problem(domain_, name_, own_objects(), std::move(init), std::move(goals));
}

Problem Problem::restricted_to(const std::vector<std::string>& keep, std::vector<Fact> init,
                               std::vector<Fact> goals, std::string name) const {
  std::set<std::string> wanted(keep.begin(), keep.end());
  std::vector<TypedName> objs;
  for (const auto& o : own_objects())
    if (wanted.count(o.name)) objs.push_back(o);
  return Problem(domain_, std::move(name), std::move(objs), std::move(init), std::move(goals));
}

// Plan

bool Plan::orderings_consistent() const {
  return std::all_of(orderings.begin(), orderings.end(), [&](const auto& o) {
    return o.first < o.second && o.second < steps.size();
  });
}

std::string format_plan(const Plan& plan, bool with_cost) {
  std::ostringstream out;
  for (const auto& s : plan.steps) out << s.to_string() << '\n';
  if (with_cost) out << "; cost = " << plan.size() << " (unit cost)\n";
  return out.str();
}

Plan parse_plan(const std::string& text) {
  Plan plan;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto semi = line.find(';');
    if (semi != std::string::npos) line.erase(semi);
    auto open = line.find('(');
    if (open == std::string::npos) {
      if (line.find_first_not_of(" \t\r") != std::string::npos)
        throw ParseError("expected '(' in plan line", lineno, 1);
      continue;
    }
    auto close = line.find(')', open);
    if (close == std::string::npos) throw ParseError("unterminated plan step", lineno, open + 1);
    std::istringstream tokens(line.substr(open + 1, close - open - 1));
    Step step;
    std::string tok;
    while (tokens >> tok) {
      std::transform(tok.begin(), tok.end(), tok.begin(), [](unsigned char c) { return std::tolower(c); });
      if (step.op.empty())
        step.op = tok;
      else
        step.args.push_back(tok);
    }
    if (step.op.empty()) throw ParseError("empty plan step", lineno, open + 1);
    plan.steps.push_back(std::move(step));
  }
  return plan;
}

}  // namespace oak
