#include <doctest.h>

#include <set>

#include "support.hpp"
#include "vplague/population.hpp"

using namespace vplague;

TEST_CASE("default spec yields 2000 living, susceptible, unaware avatars") {
  const auto world = build_world(default_world_spec());
  Rng rng(1);
  const auto pop = generate_population(PopulationSpec{}, world, rng);
  REQUIRE(pop.size() == 2000);
  for (const auto& a : pop.avatars) {
    CHECK(a.alive);
    CHECK(a.susceptible());
    CHECK_FALSE(a.awareness.aware());
    CHECK(a.heal_capability >= 0.0);
    CHECK(a.heal_capability <= 1.0);
    CHECK(a.zone == a.home_zone);
    CHECK(a.level >= 1);
    CHECK(a.level <= 60);
  }
}

TEST_CASE("empty population") {
  const auto world = build_world(default_world_spec());
  PopulationSpec spec;
  spec.count = 0;
  Rng rng(1);
  const auto pop = generate_population(spec, world, rng);
  CHECK(pop.size() == 0);
  CHECK(pop.social.size() == 0);
  CHECK(pop.pets.empty());
}

TEST_CASE("zone occupancy follows density weights") {
  WorldSpec ws;
  ws.zones = {{"big", 3.0, false, {"small"}}, {"small", 1.0, false, {}}};
  const auto world = build_world(ws);
  PopulationSpec spec;
  spec.count = 100000;
  spec.social_degree_mean = 0.0;
  spec.pets_per_avatar_mean = 0.0;
  Rng rng(9);
  const auto pop = generate_population(spec, world, rng);
  long big = 0;
  for (const auto& a : pop.avatars) big += a.zone == ZoneId(0);
  const double ratio = static_cast<double>(big) / (pop.size() - big);
  CHECK(ratio == doctest::Approx(3.0).epsilon(0.02));
}

TEST_CASE("same seed, same population") {
  const auto world = build_world(default_world_spec());
  Rng r1(77), r2(77);
  const auto a = generate_population(PopulationSpec{}, world, r1);
  const auto b = generate_population(PopulationSpec{}, world, r2);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a.avatars[i].zone == b.avatars[i].zone);
    CHECK(a.avatars[i].heal_capability == b.avatars[i].heal_capability);
    CHECK(a.avatars[i].behavior.curiosity == b.avatars[i].behavior.curiosity);
    CHECK(a.avatars[i].pets == b.avatars[i].pets);
    CHECK(a.social.out(AvatarId(static_cast<std::uint32_t>(i))) == b.social.out(AvatarId(static_cast<std::uint32_t>(i))));
  }
}

TEST_CASE("social graph: no self edges, valid endpoints, mean degree near target") {
  const auto world = build_world(default_world_spec());
  Rng rng(5);
  const auto pop = generate_population(PopulationSpec{}, world, rng);
  for (const auto& a : pop.avatars)
    for (AvatarId to : pop.social.out(a.id)) {
      CHECK(to != a.id);
      CHECK(to.index() < pop.size());
    }
  const double mean = static_cast<double>(pop.social.edge_count()) / pop.size();
  CHECK(mean == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("pets belong to exactly one existing owner") {
  const auto world = build_world(default_world_spec());
  Rng rng(5);
  const auto pop = generate_population(PopulationSpec{}, world, rng);
  std::set<std::uint32_t> seen;
  for (const auto& a : pop.avatars)
    for (PetId p : a.pets) {
      CHECK(pop.pet(p).owner == a.id);
      CHECK(seen.insert(p.value).second);
    }
  CHECK(seen.size() == pop.pets.size());
  CHECK(static_cast<double>(pop.pets.size()) / pop.size() == doctest::Approx(0.3).epsilon(0.15));
}

TEST_CASE("heal capability stays within the vocation's range") {
  const auto world = build_world(default_world_spec());
  PopulationSpec spec;
  Rng rng(2);
  const auto pop = generate_population(spec, world, rng);
  for (const auto& a : pop.avatars) {
    const auto& v = spec.vocations[a.vocation];
    CHECK(a.heal_capability >= v.heal_min);
    CHECK(a.heal_capability <= v.heal_max);
  }
}

TEST_CASE("social graph rejects self edges and out-of-range endpoints") {
  SocialGraph g(3);
  CHECK_THROWS(g.add_edge(AvatarId(1), AvatarId(1)));
  CHECK_THROWS(g.add_edge(AvatarId(0), AvatarId(3)));
  g.add_edge(AvatarId(0), AvatarId(2));
  g.add_edge(AvatarId(0), AvatarId(1));
  CHECK(g.out(AvatarId(0)) == std::vector<AvatarId>{AvatarId(1), AvatarId(2)});
  CHECK(g.has_edge(AvatarId(0), AvatarId(2)));
  CHECK_FALSE(g.has_edge(AvatarId(2), AvatarId(0)));
}

TEST_CASE("invalid specs report every problem") {
  PopulationSpec spec;
  spec.count = -1;
  spec.level_min = 10;
  spec.level_max = 5;
  spec.social_degree_mean = -1;
  CHECK(validate_population_spec(spec).size() >= 3);
}
