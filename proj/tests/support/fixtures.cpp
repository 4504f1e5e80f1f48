#include "fixtures.hpp"

#include <sstream>

namespace oak::test {

std::string data_path(const std::string& relative) { return std::string(OAK_TEST_DATA_DIR) + "/" + relative; }

std::shared_ptr<const Domain> load_domain(const std::string& relative) {
  return parse_domain(read_file(data_path(relative)));
}

Problem load_problem(const std::shared_ptr<const Domain>& domain, const std::string& relative) {
  return parse_problem(domain, read_file(data_path(relative)));
}

Plan load_plan(const std::string& relative) { return parse_plan(read_file(data_path(relative))); }

Delivery::Delivery(std::size_t length)
    : problem(parse_problem(domain,
                            "(define (problem delivery) (:domain logistics)"
                            " (:objects c - city l1 l2 l3 - location t - truck p - package)"
                            " (:init (in-city l1 c) (in-city l2 c) (in-city l3 c) (at t l3) (at p l1))"
                            " (:goal (at p l2)))")) {
  auto drive = [](const char* from, const char* to) { return Step{"drive-truck", {"t", from, to, "c"}}; };
  // odd lengths detour through l2 on the way to the package
  if (length % 2 == 1) {
    plan.steps.push_back(drive("l3", "l2"));
    plan.steps.push_back(drive("l2", "l1"));
  } else {
    plan.steps.push_back(drive("l3", "l1"));
  }
  plan.steps.push_back(Step{"load-truck", {"p", "t", "l1"}});
  plan.steps.push_back(drive("l1", "l2"));
  plan.steps.push_back(Step{"unload-truck", {"p", "t", "l2"}});
  while (plan.steps.size() + 2 <= length) {
    plan.steps.push_back(drive("l2", "l3"));
    plan.steps.push_back(drive("l3", "l2"));
  }
}

// "(on a b)" -> Fact
Fact fact(const std::string& text) {
  std::istringstream in(text.substr(1, text.size() - 2));
  Fact f;
  in >> f.predicate;
  for (std::string a; in >> a;) f.args.push_back(a);
  return f;
}

Step step(const std::string& text) {
  Fact f = fact(text);
  return Step{f.predicate, f.args};
}

}  // namespace oak::test
