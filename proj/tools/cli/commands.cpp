#include "commands.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>

#include <nlohmann/json.hpp>

#include "generators.hpp"
#include "oak/errors.hpp"
#include "oak/pddl.hpp"

namespace oak::cli {
namespace {

using Json = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

Json number_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

Json plan_json(const Plan& p) {
  Json steps = Json::array();
  for (const auto& s : p.steps) steps.push_back(s.to_string());
  return steps;
}

std::string facts_text(const std::vector<Fact>& facts) {
  std::string s;
  for (const auto& f : facts) s += (s.empty() ? "" : " ") + f.to_string();
  return s;
}

double elapsed_ms(Clock::time_point since) {
  return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

Problem load_problem(const std::shared_ptr<const Domain>& domain, const std::string& path) {
  return parse_problem(domain, read_file(path));
}

CaseBase open_library(const std::string& dir, const std::shared_ptr<const Domain>& domain) {
  CaseBase base = CaseBase::open(dir);
  if (base.domain() && format_domain(*base.domain()) != format_domain(*domain))
    throw LibraryError("library " + dir + " holds domain " + base.domain()->name + ", not " + domain->name);
  return base;
}

template <class F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const std::exception& e) {
    err << "oak: error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace

const char* to_string(Outcome o) {
  switch (o) {
    case Outcome::Solved:
      return "solved";
    case Outcome::QuasiSolution:
      return "quasi-solution";
    case Outcome::Unsolved:
      return "unsolved";
  }
  return "unsolved";
}

RunReport solve(const SolveOptions& opt) {
  RunReport report;
  auto t0 = Clock::now();
  auto domain = parse_domain(read_file(opt.domain));
  Problem problem = load_problem(domain, opt.problem);
  CaseBase base = opt.library ? open_library(*opt.library, domain) : CaseBase(domain);
  report.timings_ms["parse"] = elapsed_ms(t0);

  t0 = Clock::now();
  Plan candidate;
  RetrievalResult retrieval;
  if (opt.merge) {
    MergeResult m = merge_subplans(base, problem, opt.retrieval);
    retrieval = std::move(m.retrieval);
    candidate = std::move(m.plan);
    report.merge_iterations = std::move(m.iterations);
  } else {
    retrieval = retrieve(base, problem, opt.retrieval);
    candidate = retrieval.plan;
  }
  report.timings_ms[opt.merge ? "merge" : "retrieve"] = elapsed_ms(t0);
  report.source = retrieval.case_id;
  report.retrieved = retrieval.plan;
  report.best_cost = retrieval.best_cost;
  report.relaxed_cost = retrieval.relaxed_cost;
  report.trace = retrieval.trace;

  t0 = Clock::now();
  Task task(problem);
  try {
    report.plan = repair_completion(task, candidate);
    report.outcome = Outcome::Solved;
  } catch (const IncompleteRepair& e) {
    report.plan = e.plan();
    report.outcome = std::isfinite(report.relaxed_cost) ? Outcome::QuasiSolution : Outcome::Unsolved;
  }
  report.timings_ms["repair"] = elapsed_ms(t0);
  report.differing_actions = differing_actions(report.plan, report.retrieved);

  if (opt.record_usage && opt.library && report.source)
    base.record_usage(*report.source, report.outcome == Outcome::Solved);
  return report;
}

int cmd_solve(const SolveOptions& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    RunReport r = solve(opt);
    if (opt.json) {
      Json j;
      j["outcome"] = to_string(r.outcome);
      j["plan"] = plan_json(r.plan);
      j["plan_length"] = r.plan.size();
      j["source"] = r.source ? Json(*r.source) : Json(nullptr);
      j["retrieved_length"] = r.retrieved.size();
      j["differing_actions"] = r.differing_actions;
      j["best_cost"] = number_or_null(r.best_cost);
      j["relaxed_cost"] = number_or_null(r.relaxed_cost);
      Json trace = Json::array();
      for (const auto& t : r.trace) trace.push_back({{"stage", t.stage}, {"candidates", t.candidates}, {"best", number_or_null(t.best)}});
      j["funnel_trace"] = std::move(trace);
      Json merges = Json::array();
      for (const auto& m : r.merge_iterations)
        merges.push_back({{"fact", m.fact.to_string()},
                          {"case", m.case_id},
                          {"cost_before", number_or_null(m.cost_before)},
                          {"cost_after", number_or_null(m.cost_after)}});
      j["merge_iterations"] = std::move(merges);
      if (opt.timings) j["timings_ms"] = r.timings_ms;
      out << j.dump(2) << '\n';
    } else {
      out << format_plan(r.plan) << '\n';
      out << "outcome: " << to_string(r.outcome) << '\n';
      out << "plan-length: " << r.plan.size() << '\n';
      out << "source: " << (r.source ? "case " + std::to_string(*r.source) : std::string("empty plan")) << '\n';
      out << "retrieved-length: " << r.retrieved.size() << '\n';
      out << "differing-actions: " << r.differing_actions << '\n';
      out << "best-cost: " << r.best_cost << '\n';
      out << "relaxed-cost: " << r.relaxed_cost << '\n';
      for (const auto& t : r.trace)
        out << "stage=" << t.stage << " candidates=" << t.candidates << " best=" << t.best << '\n';
      for (const auto& m : r.merge_iterations)
        out << "merge fact=" << m.fact.to_string() << " case=" << m.case_id << " cost=" << m.cost_before << "->"
            << m.cost_after << '\n';
      if (opt.timings)
        for (const auto& [stage, ms] : r.timings_ms) out << "time-" << stage << "-ms: " << ms << '\n';
    }
    return r.outcome == Outcome::Solved ? 0 : 2;
  });
}

int cmd_add_case(const AddCaseOptions& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    auto domain = parse_domain(read_file(opt.domain));
    Problem problem = load_problem(domain, opt.problem);
    Plan plan = parse_plan(read_file(opt.plan));
    CaseBase base = open_library(opt.library, domain);
    InsertOutcome ins = insert_case(base, problem, plan, opt.gamma);
    std::optional<UpdateReport> upd;
    if (opt.decompose) upd = update_library(base, problem, plan, {}, ins.id, opt.gamma);

    auto describe = [](const InsertOutcome& o, std::size_t size) {
      if (o.inserted) return "inserted case " + std::to_string(*o.id);
      if (o.dominated_by) return "rejected (dominated by case " + std::to_string(*o.dominated_by) + ")";
      return "skipped (size " + std::to_string(size) + ")";
    };
    if (opt.json) {
      Json j;
      j["inserted"] = ins.inserted;
      j["id"] = ins.id ? Json(*ins.id) : Json(nullptr);
      j["dominated_by"] = ins.dominated_by ? Json(*ins.dominated_by) : Json(nullptr);
      j["replaced"] = ins.replaced;
      if (upd) {
        Json subs = Json::array();
        for (std::size_t i = 0; i < upd->outcomes.size(); ++i) {
          Json goals = Json::array();
          for (const auto& f : upd->candidate_goals[i]) goals.push_back(f.to_string());
          subs.push_back({{"goals", goals},
                          {"plan_length", upd->candidate_sizes[i]},
                          {"result", describe(upd->outcomes[i], upd->candidate_sizes[i])}});
        }
        j["subcases"] = std::move(subs);
        j["subcases_inserted"] = upd->inserted;
      }
      j["library_size"] = base.size();
      out << j.dump(2) << '\n';
    } else {
      out << describe(ins, plan.size()) << '\n';
      for (CaseId r : ins.replaced) out << "replaced case " << r << '\n';
      if (upd) {
        out << "subcases: candidates=" << upd->candidates << " inserted=" << upd->inserted << '\n';
        for (std::size_t i = 0; i < upd->outcomes.size(); ++i) {
          out << "  " << facts_text(upd->candidate_goals[i]) << ": "
              << describe(upd->outcomes[i], upd->candidate_sizes[i]) << '\n';
          for (CaseId r : upd->outcomes[i].replaced) out << "    replaced case " << r << '\n';
        }
      }
      out << "library-size: " << base.size() << '\n';
    }
    return 0;
  });
}

int cmd_match(const MatchOptions& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    auto domain = parse_domain(read_file(opt.domain));
    Problem a = load_problem(domain, opt.case_problem);
    Problem b = load_problem(domain, opt.problem);
    const auto ga = encode_problem(a);
    const auto gb = encode_problem(b);
    const double ds = ds_similarity(degree_signature(ga), degree_signature(gb));

    struct Row {
      std::string name;
      double score;
      std::optional<ObjectMapping> mu;
      double simil = 0.0, complete = 0.0;
    };
    std::vector<Row> rows;
    KernelMatch kb = kernel_base(ga, gb);
    KernelMatch kn = kernel_neighborhood(ga, gb, opt.gamma);
    rows.push_back({"base", kb.score, complete_mapping(a, b, kb.mapping)});
    rows.push_back({"neighborhood", kn.score, complete_mapping(a, b, kn.mapping)});
    if (opt.exact) {
      ExactMatch em = exact_match(a, b);
      rows.push_back({"exact", em.k, em.feasible ? complete_mapping(a, b, em.mapping) : std::nullopt});
    }
    for (auto& r : rows)
      if (r.mu) {
        r.simil = simil(a, b, *r.mu).value;
        r.complete = complete_simil(a, b, *r.mu);
      }
    const std::string selected = rows[1].mu && (!rows[0].mu || rows[1].simil >= rows[0].simil) ? "neighborhood" : "base";

    if (opt.json) {
      Json j;
      j["ds_similarity"] = ds;
      for (const auto& r : rows) {
        Json m = Json::object();
        if (r.mu)
          for (const auto& [from, to] : r.mu->pairs) m[from] = to;
        j[r.name] = {{"score", r.score},
                     {"mapping", r.mu ? m : Json(nullptr)},
                     {"simil", r.simil},
                     {"complete_simil", r.complete}};
      }
      j["selected"] = selected;
      out << j.dump(2) << '\n';
    } else {
      out << "ds-similarity: " << ds << '\n';
      for (const auto& r : rows) {
        out << r.name << ": score=" << r.score << " mapping=" << (r.mu ? r.mu->to_string() : "none") << '\n';
        out << "  simil=" << r.simil << " complete-simil=" << r.complete << '\n';
      }
      out << "selected: " << selected << '\n';
    }
    return 0;
  });
}

int cmd_stats(const StatsOptions& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (!std::filesystem::exists(std::filesystem::path(opt.library) / "index.oak"))
      throw LibraryError("no library at " + opt.library);
    CaseBase base = CaseBase::open(opt.library);
    static const std::vector<std::pair<std::size_t, std::string>> buckets{
        {5, "0-4"}, {10, "5-9"}, {20, "10-19"}, {50, "20-49"}, {100, "50-99"}, {200, "100-199"}, {SIZE_MAX, "200+"}};
    std::vector<std::size_t> hist(buckets.size(), 0);
    std::size_t subplans = 0, attempts = 0, successes = 0;
    for (const auto& c : base.cases()) {
      if (c.kind == CaseKind::Subplan) ++subplans;
      attempts += c.usage.attempts;
      successes += c.usage.successes;
      std::size_t k = 0;
      while (c.solution.size() >= buckets[k].first) ++k;
      ++hist[k];
    }
    const double ratio = base.empty() ? 0.0 : static_cast<double>(subplans) / static_cast<double>(base.size());
    const double rate = attempts == 0 ? 0.0 : static_cast<double>(successes) / static_cast<double>(attempts);
    if (opt.json) {
      Json j;
      j["domain"] = base.domain() ? Json(base.domain()->name) : Json(nullptr);
      j["cases"] = base.size();
      j["solutions"] = base.size() - subplans;
      j["subplans"] = subplans;
      j["subcase_ratio"] = ratio;
      Json h = Json::object();
      for (std::size_t i = 0; i < buckets.size(); ++i) h[buckets[i].second] = hist[i];
      j["plan_length_histogram"] = std::move(h);
      j["usage"] = {{"attempts", attempts}, {"successes", successes}, {"success_rate", rate}};
      out << j.dump(2) << '\n';
    } else {
      out << "domain: " << (base.domain() ? base.domain()->name : "-") << '\n';
      out << "cases: " << base.size() << '\n';
      out << "solutions: " << base.size() - subplans << '\n';
      out << "subplans: " << subplans << '\n';
      out << "subcase-ratio: " << ratio << '\n';
      out << "plan-length-histogram:\n";
      for (std::size_t i = 0; i < buckets.size(); ++i) out << "  " << buckets[i].second << ": " << hist[i] << '\n';
      out << "usage: attempts=" << attempts << " successes=" << successes << " rate=" << rate << '\n';
    }
    return 0;
  });
}

int cmd_generate(const GenerateOptions& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    gen::Rng rng(opt.seed);
    gen::Instance inst;
    if (opt.kind == "blocks") {
      inst = gen::random_blocks(rng, opt.size);
    } else if (opt.kind == "logistics") {
      gen::LogisticsShape shape;
      shape.packages = opt.size;
      inst = gen::random_logistics(rng, shape);
    } else if (opt.kind == "tower") {
      std::vector<gen::Instance> parts;
      for (std::size_t i = 0; i < std::max<std::size_t>(opt.size, 1); ++i)
        parts.push_back(gen::tower_reversal("", rng() % 2 == 0));
      inst = gen::disjoint_union(parts);
    } else {
      throw Error("unknown instance kind '" + opt.kind + "' (blocks, logistics, tower)");
    }
    if (!opt.out_dir) {
      out << format_problem(inst.problem);
      return 0;
    }
    std::filesystem::path dir(*opt.out_dir);
    std::filesystem::create_directories(dir);
    auto write = [&](const char* name, const std::string& text) {
      std::ofstream f(dir / name, std::ios::binary | std::ios::trunc);
      if (!(f << text)) throw Error("cannot write " + (dir / name).string());
    };
    write("domain.pddl", format_domain(inst.problem.domain()));
    write("problem.pddl", format_problem(inst.problem));
    write("plan.txt", format_plan(inst.plan));
    out << "wrote " << (dir / "domain.pddl").string() << ", problem.pddl, plan.txt (" << inst.plan.size()
        << " steps)\n";
    return 0;
  });
}

}  // namespace oak::cli
