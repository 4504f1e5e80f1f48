#pragma once

#include <memory>
#include <string>

#include "oak/pddl.hpp"
#include "oak/strips.hpp"

namespace oak::test {

/// Absolute path of a file under tests/data.
std::string data_path(const std::string& relative);

std::shared_ptr<const Domain> load_domain(const std::string& relative);
Problem load_problem(const std::shared_ptr<const Domain>& domain, const std::string& relative);
Plan load_plan(const std::string& relative);

/// The Sussman anomaly on the hand-free Blocksworld.
struct Sussman {
  std::shared_ptr<const Domain> domain = load_domain("blocks/domain.pddl");
  Problem problem = load_problem(domain, "blocks/sussman.pddl");
  Plan plan = load_plan("blocks/sussman.plan");
};

/// One truck ferrying one package between two of three places in a city,
/// with a valid plan of exactly `length` steps (at least 4).
struct Delivery {
  std::shared_ptr<const Domain> domain = load_domain("logistics/domain.pddl");
  Problem problem;
  Plan plan;

  explicit Delivery(std::size_t length);
};

Fact fact(const std::string& text);
Step step(const std::string& text);

}  // namespace oak::test
