#include "oak/task.hpp"

#include <algorithm>
#include <set>

#include "oak/errors.hpp"

namespace oak {
namespace {

std::vector<std::vector<std::string>> candidates_per_slot(const Problem& p,
                                                          const std::vector<std::string>& sorts) {
  std::vector<std::vector<std::string>> out;
  for (const auto& s : sorts) {
    std::vector<std::string> fit;
    for (const auto& o : p.objects())
      if (p.domain().is_subsort(o.sort, s)) fit.push_back(o.name);
    out.push_back(std::move(fit));
  }
  return out;
}

// Calls fn(tuple) for every element of the cartesian product, in lexicographic order.
template <typename Fn>
void for_each_tuple(const std::vector<std::vector<std::string>>& slots, Fn&& fn) {
  for (const auto& s : slots)
    if (s.empty()) return;
  std::vector<std::size_t> idx(slots.size(), 0);
  std::vector<std::string> tuple(slots.size());
  for (;;) {
    for (std::size_t i = 0; i < slots.size(); ++i) tuple[i] = slots[i][idx[i]];
    fn(tuple);
    std::size_t k = slots.size();
    while (k > 0) {
      --k;
      if (++idx[k] < slots[k].size()) break;
      idx[k] = 0;
      if (k == 0) return;
    }
    if (slots.empty()) return;
  }
}

void sort_unique(std::vector<FactId>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

}  // namespace

Task::Task(Problem problem) : problem_(std::make_shared<const Problem>(std::move(problem))) {
  enumerate_atoms();
  init_ = to_set(problem_->init());
  goals_ = to_set(problem_->goals());
  ground_actions();
}

void Task::enumerate_atoms() {
  for (const auto& pred : problem_->domain().predicates) {
    for_each_tuple(candidates_per_slot(*problem_, pred.param_sorts), [&](const auto& tuple) {
      Fact f{pred.name, tuple};
      fact_index_.emplace(f, static_cast<FactId>(facts_.size()));
      fact_names_.push_back(f.to_string());
      facts_.push_back(std::move(f));
    });
  }
  achievers_.resize(facts_.size());
}

std::optional<FactId> Task::find_fact(const Fact& f) const {
  auto it = fact_index_.find(f);
  if (it == fact_index_.end()) return std::nullopt;
  return it->second;
}

FactId Task::fact_id(const Fact& f) const {
  auto id = find_fact(f);
  if (!id) throw SortError("not a well-sorted atom of problem " + problem_->name() + ": " + f.to_string());
  return *id;
}

FactSet Task::to_set(const std::vector<Fact>& facts) const {
  FactSet s(facts_.size());
  for (const auto& f : facts) s.set(fact_id(f));
  return s;
}

std::vector<Fact> Task::to_facts(const FactSet& set) const {
  std::vector<Fact> out;
  for (auto i = set.find_first(); i != FactSet::npos; i = set.find_next(i)) out.push_back(facts_[i]);
  std::sort(out.begin(), out.end());
  return out;
}

GroundAction Task::instantiate(const Step& step) const {
  const Domain& dom = problem_->domain();
  const OperatorSchema* op = dom.find_operator(step.op);
  if (!op) throw SortError("unknown action " + step.op);
  if (op->params.size() != step.args.size())
    throw SortError("wrong number of arguments in " + step.to_string());
  std::map<std::string, std::string> binding;
  for (std::size_t i = 0; i < step.args.size(); ++i) {
    auto sort = problem_->sort_of(step.args[i]);
    if (!sort) throw SortError("undeclared object " + step.args[i] + " in " + step.to_string());
    if (!dom.is_subsort(*sort, op->params[i].sort))
      throw SortError("object " + step.args[i] + " does not fit parameter " + op->params[i].name + " - " +
                      op->params[i].sort + " in " + step.to_string());
    binding[op->params[i].name] = step.args[i];
  }
  auto ground = [&](const std::vector<AtomTemplate>& atoms) {
    std::vector<FactId> ids;
    for (const auto& a : atoms) {
      Fact f{a.predicate, {}};
      for (const auto& arg : a.args) f.args.push_back(arg[0] == '?' ? binding.at(arg) : arg);
      ids.push_back(fact_id(f));
    }
    sort_unique(ids);
    return ids;
  };
  GroundAction g{step, ground(op->pre), ground(op->add), ground(op->del)};
  std::erase_if(g.del, [&](FactId d) { return std::binary_search(g.add.begin(), g.add.end(), d); });
  return g;
}

void Task::ground_actions() {
  const Domain& dom = problem_->domain();
  std::set<std::string> fluent_predicates;
  for (const auto& op : dom.operators)
    for (const auto* atoms : {&op.add, &op.del})
      for (const auto& a : *atoms) fluent_predicates.insert(a.predicate);

  for (const auto& op : dom.operators) {
    std::vector<std::string> sorts;
    for (const auto& p : op.params) sorts.push_back(p.sort);
    for_each_tuple(candidates_per_slot(*problem_, sorts), [&](const auto& tuple) {
      Step step{op.name, tuple};
      GroundAction g;
      try {
        g = instantiate(step);
      } catch (const SortError&) {
        return;  // a parameter wider than a predicate slot
      }
      for (FactId f : g.pre)
        if (!fluent_predicates.count(facts_[f].predicate) && !init_.test(f)) return;
      auto id = static_cast<ActionId>(actions_.size());
      action_index_.emplace(step, id);
      for (FactId f : g.add) achievers_[f].push_back(id);
      actions_.push_back(std::move(g));
    });
  }
}

std::optional<ActionId> Task::find_action(const Step& step) const {
  auto it = action_index_.find(step);
  if (it == action_index_.end()) return std::nullopt;
  return it->second;
}

FactSet apply(const FactSet& state, const GroundAction& a) {
  FactSet next = state;
  for (FactId f : a.del) next.reset(f);
  for (FactId f : a.add) next.set(f);
  return next;
}

bool supported(const FactSet& state, const GroundAction& a) {
  return std::all_of(a.pre.begin(), a.pre.end(), [&](FactId f) { return state.test(f); });
}

ValidationReport validate(const Task& task, const Plan& plan) {
  ValidationReport report;
  FactSet state = task.init();
  for (std::size_t i = 0; i < plan.steps.size(); ++i) {
    GroundAction a = task.instantiate(plan.steps[i]);
    for (FactId f : a.pre)
      if (!state.test(f)) report.unsupported.push_back({i, f});
    state = oak::apply(state, a);
  }
  const FactSet& g = task.goals();
  for (auto f = g.find_first(); f != FactSet::npos; f = g.find_next(f))
    if (!state.test(f)) report.unsatisfied_goals.push_back(static_cast<FactId>(f));
  report.final_state = std::move(state);
  return report;
}

FactSet relevant_init_facts(const Task& task, const Plan& plan) {
  FactSet used = task.empty_set();
  for (const auto& s : plan.steps)
    for (FactId f : task.instantiate(s).pre) used.set(f);
  return used & task.init();
}

}  // namespace oak
