#pragma once

// Random toy instances with known solution plans, used by the tests, the
// benchmarks and `oak generate`.

#include <cstdint>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "oak/matching.hpp"
#include "oak/strips.hpp"

namespace oak::gen {

using Rng = std::mt19937_64;

/// Blocksworld without a hand: pickup/putdown/stack/unstack on `block`.
const std::string& blocks_domain_text();
/// Typed Logistics with trucks, airplanes, airports and cities.
const std::string& logistics_domain_text();

std::shared_ptr<const Domain> blocks_domain();
std::shared_ptr<const Domain> logistics_domain();

struct Instance {
  Problem problem;
  Plan plan;  // valid, not necessarily optimal
};

/// Random initial and goal towers over `blocks` blocks; the goal holds only
/// the `on` facts of the goal towers (at least one). The plan unstacks
/// everything and rebuilds.
Instance random_blocks(Rng& rng, std::size_t blocks);

/// A three-block tower z/y/x to be reversed; both `on` goals, or only the
/// top one when `both_goals` is false. Six-step plan.
Instance tower_reversal(const std::string& prefix, bool both_goals = true);

struct LogisticsShape {
  std::size_t cities = 2;
  std::size_t locations_per_city = 1;  // besides the airport
  std::size_t airplanes = 1;
  std::size_t packages = 1;
};

/// One truck per city; trucks, airplanes and packages start at random
/// places, packages get random destinations different from their origin.
Instance random_logistics(Rng& rng, const LogisticsShape& shape);

/// Objects of each instance get the prefix "<prefix><i>-"; facts, goals and
/// plans are concatenated.
Instance disjoint_union(const std::vector<Instance>& parts, const std::string& prefix = "g");

struct Renamed {
  Instance instance;
  ObjectMapping mapping;  // original -> renamed
};

/// Uniformly random bijective renaming of the problem's own objects to
/// fresh names "r<k>".
Renamed rename_objects(Rng& rng, const Instance& instance);

}  // namespace oak::gen
