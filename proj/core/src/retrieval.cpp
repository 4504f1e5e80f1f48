#include "oak/retrieval.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "oak/errors.hpp"

namespace oak {
namespace {

constexpr double kEps = 1e-12;

bool injectable(const PlanningCase& c, const std::map<std::string, std::size_t>& available) {
  for (const auto& [sort, n] : c.sort_counts()) {
    auto it = available.find(sort);
    if (it == available.end() || it->second < n) return false;
  }
  return true;
}

// Keeps the entries scoring within `limit` of the best, best first, ties by id.
template <class Score>
void window(std::vector<CandidateRecord*>& cands, Score score, double limit, std::size_t cap) {
  std::stable_sort(cands.begin(), cands.end(), [&](const CandidateRecord* a, const CandidateRecord* b) {
    double sa = score(*a), sb = score(*b);
    return sa != sb ? sa > sb : a->id < b->id;
  });
  if (cands.empty()) return;
  const double floor = score(*cands.front()) - limit - kEps;
  std::size_t keep = 0;
  while (keep < cands.size() && keep < cap && score(*cands[keep]) >= floor) ++keep;
  cands.resize(keep);
}

}  // namespace

Plan relaxed_plan_steps(const Task& task, bool* unreachable) {
  EvaluationResult e = evaluate_plan(task, Plan{});
  if (unreachable) *unreachable = e.unreachable;
  Plan p;
  if (e.unreachable) return p;
  for (ActionId a : e.repair.actions) p.steps.push_back(task.action(a).step);
  return p;
}

RetrievalResult retrieve(const CaseBase& base, const Problem& problem, const RetrievalConfig& config) {
  RetrievalResult out;
  Task task(problem);

  // Step 1: generation estimate and the relevance-filtered problem.
  bool unreachable = false;
  out.relaxed = relaxed_plan_steps(task, &unreachable);
  out.relaxed_cost = unreachable ? kInfiniteCost : static_cast<double>(out.relaxed.size());
  std::vector<Fact> relevant_init =
      unreachable ? problem.init() : task.to_facts(relevant_init_facts(task, out.relaxed));
  const PlanningEncodingGraph full_graph = encode_problem(problem);
  const DegreeSignature relaxed_sig = degree_signature(encode_problem(problem, relevant_init, problem.goals()));
  out.best_cost = config.alpha_g * out.relaxed_cost;

  std::map<std::string, std::size_t> available;
  for (const auto& o : problem.own_objects()) ++available[o.sort];

  // Step 2: degree-sequence screen.
  std::map<CaseId, const PlanningCase*> by_id;
  for (const auto& c : base.cases()) {
    if (!injectable(c, available)) continue;
    by_id[c.id] = &c;
    CandidateRecord r;
    r.id = c.id;
    r.ds = ds_similarity(c.signature, relaxed_sig);
    out.candidates.push_back(std::move(r));
  }
  std::vector<CandidateRecord*> cands;
  for (auto& r : out.candidates) cands.push_back(&r);
  window(cands, [](const CandidateRecord& r) { return r.ds; }, config.limit, config.screen_cap);
  out.trace.push_back({"ds", cands.size(), cands.empty() ? 0.0 : cands.front()->ds});

  // Step 3: base kernel on the full problem graph.
  std::map<CaseId, KernelMatch> base_match;
  for (auto* r : cands) {
    base_match[r->id] = kernel_base(by_id[r->id]->encoding, full_graph);
    r->base = base_match[r->id].score;
  }
  window(cands, [](const CandidateRecord& r) { return *r.base; }, config.limit, cands.size());
  out.trace.push_back({"base", cands.size(), cands.empty() ? 0.0 : *cands.front()->base});

  // Step 3.3: neighbourhood kernel; keep whichever mapping scores the higher simil.
  for (auto* r : cands) {
    const PlanningCase& c = *by_id[r->id];
    KernelMatch kn = kernel_neighborhood(c.encoding, full_graph, config.gamma);
    r->neighborhood = kn.score;
    r->simil = -1.0;
    for (const ObjectMapping* partial : {&base_match[r->id].mapping, &kn.mapping}) {
      auto mu = complete_mapping(c.problem, problem, *partial);
      if (!mu) continue;
      double s = simil(c.problem, problem, *mu).value;
      // μ_N wins ties, as it is tried second.
      if (s >= *r->simil) {
        r->simil = s;
        r->mapping = std::move(*mu);
      }
    }
    if (config.exact && c.problem.own_objects().size() <= kExactMatchLimit) {
      ExactMatch em = exact_match(c.problem, problem);
      if (em.feasible && em.k > *r->simil + kEps) {
        if (auto mu = complete_mapping(c.problem, problem, em.mapping)) {
          r->simil = em.k;
          r->mapping = std::move(*mu);
        }
      }
    }
    if (*r->simil < 0) r->simil.reset();
  }
  std::erase_if(cands, [](const CandidateRecord* r) { return !r->simil; });
  window(cands, [](const CandidateRecord& r) { return *r.neighborhood; }, config.limit, cands.size());
  out.trace.push_back({"neighborhood", cands.size(), cands.empty() ? 0.0 : *cands.front()->neighborhood});

  // Step 4: cost-bounded evaluation; the empty plan is the incumbent.
  std::size_t evaluated = 0;
  for (auto* r : cands) {
    const double s = *r->simil;
    if (s <= 0.0) continue;
    const PlanningCase& c = *by_id[r->id];
    Plan mapped = map_plan(r->mapping, c.solution);
    const double climit = out.best_cost * s;
    double cost = kInfiniteCost;
    try {
      EvaluationResult e = evaluate_plan(task, mapped, climit);
      if (!e.truncated) cost = e.cost();
    } catch (const SortError&) {
      // A mapped step outside the problem's sorts cannot be executed.
    }
    ++evaluated;
    r->cost = cost;
    if (out.best_cost * s > cost) {
      out.best_cost = cost / s;
      out.plan = std::move(mapped);
      out.case_id = c.id;
      out.mapping = r->mapping;
    }
  }
  out.trace.push_back({"cost", evaluated, out.best_cost});
  return out;
}

std::string format_trace(const RetrievalResult& r) {
  std::ostringstream os;
  os.precision(6);
  for (const auto& t : r.trace) os << "stage=" << t.stage << " candidates=" << t.candidates << " best=" << t.best << '\n';
  return os.str();
}

}  // namespace oak
