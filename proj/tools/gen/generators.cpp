#include "generators.hpp"

#include <map>
#include <set>

#include "oak/pddl.hpp"

namespace oak::gen {
namespace {

// Portable draws: the distributions in <random> are implementation-defined.
std::size_t pick(Rng& rng, std::size_t n) { return static_cast<std::size_t>(rng() % n); }

template <class T>
void shuffle(Rng& rng, std::vector<T>& v) {
  for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[pick(rng, i)]);
}

Fact fact(std::string pred, std::vector<std::string> args) { return Fact{std::move(pred), std::move(args)}; }
Step step(std::string op, std::vector<std::string> args) { return Step{std::move(op), std::move(args)}; }

// Random partition of `items` into ordered towers (bottom first).
std::vector<std::vector<std::string>> random_towers(Rng& rng, std::vector<std::string> items) {
  shuffle(rng, items);
  std::vector<std::vector<std::string>> towers;
  for (auto& b : items) {
    std::size_t k = pick(rng, towers.size() + 1);
    if (k == towers.size())
      towers.push_back({b});
    else
      towers[k].push_back(b);
  }
  return towers;
}

}  // namespace

const std::string& blocks_domain_text() {
  static const std::string text = R"((define (domain blocks)
  (:requirements :strips :typing)
  (:types block)
  (:predicates (on ?x - block ?y - block) (ontable ?x - block) (clear ?x - block) (holding ?x - block))
  (:action pickup
    :parameters (?x - block)
    :precondition (and (clear ?x) (ontable ?x))
    :effect (and (holding ?x) (not (clear ?x)) (not (ontable ?x))))
  (:action putdown
    :parameters (?x - block)
    :precondition (holding ?x)
    :effect (and (clear ?x) (ontable ?x) (not (holding ?x))))
  (:action stack
    :parameters (?x - block ?y - block)
    :precondition (and (holding ?x) (clear ?y))
    :effect (and (on ?x ?y) (clear ?x) (not (holding ?x)) (not (clear ?y))))
  (:action unstack
    :parameters (?x - block ?y - block)
    :precondition (and (on ?x ?y) (clear ?x))
    :effect (and (holding ?x) (clear ?y) (not (on ?x ?y)) (not (clear ?x)))))
)";
  return text;
}

const std::string& logistics_domain_text() {
  static const std::string text = R"((define (domain logistics)
  (:requirements :strips :typing)
  (:types truck airplane - vehicle
          package vehicle - physobj
          airport location - place
          city place physobj - object)
  (:predicates (in-city ?loc - place ?city - city)
               (at ?obj - physobj ?loc - place)
               (in ?pkg - package ?veh - vehicle))
  (:action load-truck
    :parameters (?pkg - package ?truck - truck ?loc - place)
    :precondition (and (at ?truck ?loc) (at ?pkg ?loc))
    :effect (and (not (at ?pkg ?loc)) (in ?pkg ?truck)))
  (:action load-airplane
    :parameters (?pkg - package ?airplane - airplane ?loc - airport)
    :precondition (and (at ?pkg ?loc) (at ?airplane ?loc))
    :effect (and (not (at ?pkg ?loc)) (in ?pkg ?airplane)))
  (:action unload-truck
    :parameters (?pkg - package ?truck - truck ?loc - place)
    :precondition (and (at ?truck ?loc) (in ?pkg ?truck))
    :effect (and (not (in ?pkg ?truck)) (at ?pkg ?loc)))
  (:action unload-airplane
    :parameters (?pkg - package ?airplane - airplane ?loc - airport)
    :precondition (and (in ?pkg ?airplane) (at ?airplane ?loc))
    :effect (and (not (in ?pkg ?airplane)) (at ?pkg ?loc)))
  (:action drive-truck
    :parameters (?truck - truck ?loc-from - place ?loc-to - place ?city - city)
    :precondition (and (at ?truck ?loc-from) (in-city ?loc-from ?city) (in-city ?loc-to ?city))
    :effect (and (not (at ?truck ?loc-from)) (at ?truck ?loc-to)))
  (:action fly-airplane
    :parameters (?airplane - airplane ?loc-from - airport ?loc-to - airport)
    :precondition (at ?airplane ?loc-from)
    :effect (and (not (at ?airplane ?loc-from)) (at ?airplane ?loc-to))))
)";
  return text;
}

std::shared_ptr<const Domain> blocks_domain() {
  static const auto d = parse_domain(blocks_domain_text());
  return d;
}

std::shared_ptr<const Domain> logistics_domain() {
  static const auto d = parse_domain(logistics_domain_text());
  return d;
}

Instance random_blocks(Rng& rng, std::size_t blocks) {
  std::vector<std::string> names;
  std::vector<TypedName> objects;
  for (std::size_t i = 1; i <= blocks; ++i) {
    names.push_back("b" + std::to_string(i));
    objects.push_back({names.back(), "block"});
  }
  auto start = random_towers(rng, names);
  std::vector<std::vector<std::string>> target;
  do {
    target = random_towers(rng, names);
  } while (blocks > 1 && target.size() == blocks);

  std::vector<Fact> init, goals;
  Plan plan;
  for (const auto& t : start) {
    init.push_back(fact("ontable", {t.front()}));
    init.push_back(fact("clear", {t.back()}));
    for (std::size_t i = 1; i < t.size(); ++i) init.push_back(fact("on", {t[i], t[i - 1]}));
    for (std::size_t i = t.size(); i-- > 1;) {
      plan.steps.push_back(step("unstack", {t[i], t[i - 1]}));
      plan.steps.push_back(step("putdown", {t[i]}));
    }
  }
  for (const auto& t : target)
    for (std::size_t i = 1; i < t.size(); ++i) {
      goals.push_back(fact("on", {t[i], t[i - 1]}));
      plan.steps.push_back(step("pickup", {t[i]}));
      plan.steps.push_back(step("stack", {t[i], t[i - 1]}));
    }
  return {Problem(blocks_domain(), "blocks-" + std::to_string(blocks), std::move(objects), std::move(init),
                  std::move(goals)),
          std::move(plan)};
}

Instance tower_reversal(const std::string& prefix, bool both_goals) {
  const std::string x = prefix + "x", y = prefix + "y", z = prefix + "z";
  std::vector<Fact> init{fact("on", {z, y}), fact("on", {y, x}), fact("ontable", {x}), fact("clear", {z})};
  std::vector<Fact> goals{fact("on", {x, y})};
  if (both_goals) goals.push_back(fact("on", {y, z}));
  Plan plan;
  plan.steps = {step("unstack", {z, y}), step("putdown", {z}),    step("unstack", {y, x}),
                step("stack", {y, z}),   step("pickup", {x}),     step("stack", {x, y})};
  return {Problem(blocks_domain(), prefix + "reverse", {{x, "block"}, {y, "block"}, {z, "block"}}, std::move(init),
                  std::move(goals)),
          std::move(plan)};
}

Instance random_logistics(Rng& rng, const LogisticsShape& shape) {
  const std::size_t cities = std::max<std::size_t>(shape.cities, 1);
  const std::size_t planes = cities > 1 ? std::max<std::size_t>(shape.airplanes, 1) : shape.airplanes;
  std::vector<TypedName> objects;
  std::vector<Fact> init, goals;
  std::vector<std::string> airport(cities), truck(cities), plane(planes);
  std::vector<std::vector<std::string>> places(cities);
  std::map<std::string, std::size_t> city_of;
  for (std::size_t c = 0; c < cities; ++c) {
    const std::string id = std::to_string(c + 1);
    objects.push_back({"city" + id, "city"});
    airport[c] = "apt" + id;
    objects.push_back({airport[c], "airport"});
    places[c].push_back(airport[c]);
    for (std::size_t k = 1; k <= shape.locations_per_city; ++k) {
      places[c].push_back("loc" + id + "-" + std::to_string(k));
      objects.push_back({places[c].back(), "location"});
    }
    for (const auto& p : places[c]) {
      init.push_back(fact("in-city", {p, "city" + id}));
      city_of[p] = c;
    }
    truck[c] = "truck" + id;
    objects.push_back({truck[c], "truck"});
  }
  std::vector<std::string> all_places;
  for (const auto& ps : places) all_places.insert(all_places.end(), ps.begin(), ps.end());

  std::map<std::string, std::string> pos;
  for (std::size_t c = 0; c < cities; ++c) pos[truck[c]] = places[c][pick(rng, places[c].size())];
  for (std::size_t p = 0; p < planes; ++p) {
    plane[p] = "plane" + std::to_string(p + 1);
    objects.push_back({plane[p], "airplane"});
    pos[plane[p]] = airport[pick(rng, cities)];
  }
  for (const auto& [obj, at] : pos) init.push_back(fact("at", {obj, at}));

  Plan plan;
  auto move_truck = [&](std::size_t c, const std::string& to) {
    if (pos[truck[c]] == to) return;
    plan.steps.push_back(step("drive-truck", {truck[c], pos[truck[c]], to, "city" + std::to_string(c + 1)}));
    pos[truck[c]] = to;
  };
  auto by_truck = [&](const std::string& pkg, std::size_t c, const std::string& from, const std::string& to) {
    if (from == to) return;
    move_truck(c, from);
    plan.steps.push_back(step("load-truck", {pkg, truck[c], from}));
    move_truck(c, to);
    plan.steps.push_back(step("unload-truck", {pkg, truck[c], to}));
  };
  for (std::size_t k = 1; k <= shape.packages; ++k) {
    const std::string pkg = "pkg" + std::to_string(k);
    objects.push_back({pkg, "package"});
    const std::string from = all_places[pick(rng, all_places.size())];
    std::string to;
    do {
      to = all_places[pick(rng, all_places.size())];
    } while (all_places.size() > 1 && to == from);
    init.push_back(fact("at", {pkg, from}));
    goals.push_back(fact("at", {pkg, to}));
    const std::size_t ci = city_of[from], cj = city_of[to];
    if (ci == cj) {
      by_truck(pkg, ci, from, to);
      continue;
    }
    by_truck(pkg, ci, from, airport[ci]);
    const std::string& pl = plane[0];
    if (pos[pl] != airport[ci]) plan.steps.push_back(step("fly-airplane", {pl, pos[pl], airport[ci]}));
    plan.steps.push_back(step("load-airplane", {pkg, pl, airport[ci]}));
    plan.steps.push_back(step("fly-airplane", {pl, airport[ci], airport[cj]}));
    plan.steps.push_back(step("unload-airplane", {pkg, pl, airport[cj]}));
    pos[pl] = airport[cj];
    by_truck(pkg, cj, airport[cj], to);
  }
  return {Problem(logistics_domain(), "logistics-" + std::to_string(shape.packages), std::move(objects),
                  std::move(init), std::move(goals)),
          std::move(plan)};
}

Instance disjoint_union(const std::vector<Instance>& parts, const std::string& prefix) {
  std::vector<TypedName> objects;
  std::vector<Fact> init, goals;
  Plan plan;
  std::shared_ptr<const Domain> domain;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    const Problem& p = parts[i].problem;
    domain = p.domain_ptr();
    ObjectMapping mu;
    for (const auto& o : p.objects()) mu.pairs[o.name] = o.name;
    for (const auto& o : p.own_objects()) {
      mu.pairs[o.name] = prefix + std::to_string(i + 1) + "-" + o.name;
      objects.push_back({mu.pairs[o.name], o.sort});
    }
    for (auto& f : map_facts(mu, p.init())) init.push_back(std::move(f));
    for (auto& f : map_facts(mu, p.goals())) goals.push_back(std::move(f));
    for (auto& s : map_plan(mu, parts[i].plan).steps) plan.steps.push_back(std::move(s));
  }
  return {Problem(domain, "union-" + std::to_string(parts.size()), std::move(objects), std::move(init),
                  std::move(goals)),
          std::move(plan)};
}

Renamed rename_objects(Rng& rng, const Instance& instance) {
  const Problem& p = instance.problem;
  std::vector<TypedName> own = p.own_objects();
  std::vector<std::size_t> perm(own.size());
  for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
  shuffle(rng, perm);
  Renamed out;
  for (const auto& o : p.objects()) out.mapping.pairs[o.name] = o.name;
  std::vector<TypedName> objects;
  for (std::size_t i = 0; i < own.size(); ++i) {
    out.mapping.pairs[own[i].name] = "r" + std::to_string(perm[i] + 1);
    objects.push_back({out.mapping.pairs[own[i].name], own[i].sort});
  }
  out.instance.problem = Problem(p.domain_ptr(), p.name() + "-renamed", std::move(objects),
                                 map_facts(out.mapping, p.init()), map_facts(out.mapping, p.goals()));
  out.instance.plan = map_plan(out.mapping, instance.plan);
  return out;
}

}  // namespace oak::gen
