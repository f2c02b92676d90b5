#include <doctest.h>

#include <sstream>

#include "support.hpp"
#include "vplague/metrics.hpp"

using namespace vplague;

namespace {

/// Builds records from (generation, parent_case) pairs; -1 marks an index case.
TransmissionTree tree_of(const std::vector<std::pair<int, int>>& cases, std::vector<std::uint8_t> completed = {},
                         const std::vector<ChannelKind>& channels = {}, const std::vector<int>& zones = {}) {
  std::vector<InfectionRecord> recs;
  for (std::size_t k = 0; k < cases.size(); ++k) {
    InfectionRecord r;
    r.case_id = static_cast<std::uint32_t>(k);
    r.infectee = AvatarId(static_cast<std::uint32_t>(k));
    r.generation = cases[k].first;
    r.tick = cases[k].first;
    r.index_case = cases[k].second < 0;
    if (!r.index_case) {
      r.parent_case = static_cast<std::uint32_t>(cases[k].second);
      r.parent = AvatarId(static_cast<std::uint32_t>(cases[k].second));
    }
    if (k < channels.size()) r.channel = channels[k];
    if (k < zones.size()) r.zone = ZoneId(static_cast<std::uint32_t>(zones[k]));
    recs.push_back(r);
  }
  if (completed.empty()) completed.assign(cases.size(), 1);
  return TransmissionTree(recs, completed);
}

}  // namespace

TEST_CASE("index case infecting three, nothing further") {
  const auto tree = tree_of({{0, -1}, {1, 0}, {1, 0}, {1, 0}});
  const auto r = estimate_r0(tree);
  CHECK(r.first_generation == 3.0);
  REQUIRE(r.per_generation.size() == 2);
  CHECK(r.per_generation[0].mean == 3.0);
  CHECK(r.per_generation[1].mean == 0.0);
  CHECK(r.per_generation[1].cases == 3);
  CHECK(r.weighted_all == 0.75);
}

TEST_CASE("three generations") {
  // gen0: 1 case -> 2; gen1: 2 cases -> 3; gen2: 3 cases -> 0
  const auto tree = tree_of({{0, -1}, {1, 0}, {1, 0}, {2, 1}, {2, 1}, {2, 2}});
  const auto r = estimate_r0(tree);
  REQUIRE(r.per_generation.size() == 3);
  CHECK(r.per_generation[0].mean == 2.0);
  CHECK(r.per_generation[1].mean == 1.5);
  CHECK(r.per_generation[2].mean == 0.0);
  CHECK(*r.weighted_all == doctest::Approx(5.0 / 6.0).epsilon(1e-15));
  CHECK(r.first_generation == 2.0);
  const auto capped = estimate_r0(tree, 1);
  CHECK(capped.per_generation.size() == 2);
  CHECK(*capped.weighted_all == doctest::Approx(5.0 / 3.0));
}

TEST_CASE("lone index case and undefined results") {
  CHECK(estimate_r0(tree_of({{0, -1}})).first_generation == 0.0);
  const auto none = estimate_r0(tree_of({{0, -1}, {1, 0}}, {0, 0}));
  CHECK_FALSE(none.first_generation);
  CHECK_FALSE(none.weighted_all);
  CHECK_FALSE(estimate_r0(TransmissionTree()).weighted_all);
}

TEST_CASE("only completed cases count") {
  // index completed with 2 offspring, one offspring still ongoing
  const auto r = estimate_r0(tree_of({{0, -1}, {1, 0}, {1, 0}}, {1, 1, 0}));
  CHECK(r.first_generation == 2.0);
  CHECK(r.per_generation[1].cases == 1);
  CHECK(*r.weighted_all == doctest::Approx(1.0));
}

TEST_CASE("offspring counts by two traversals") {
  Rng rng(21);
  std::vector<std::pair<int, int>> cases = {{0, -1}, {0, -1}};
  for (int k = 2; k < 500; ++k) {
    const int parent = static_cast<int>(rng.uniform_int(0, k - 1));
    cases.push_back({cases[static_cast<std::size_t>(parent)].first + 1, parent});
  }
  const auto tree = tree_of(cases);
  CHECK(tree.acyclic());
  const auto counts = tree.offspring_counts();
  long total = 0;
  for (std::size_t k = 0; k < tree.size(); ++k) {
    CHECK(counts[k] == static_cast<int>(tree.children(k).size()));
    total += counts[k];
  }
  CHECK(total == 498);
  std::size_t by_gen = 0;
  for (const auto& g : tree.by_generation()) by_gen += g.size();
  CHECK(by_gen == tree.size());
  long gen_cases = 0;
  for (const auto& g : estimate_r0(tree).per_generation) gen_cases += g.cases;
  CHECK(gen_cases == 500);
}

TEST_CASE("a forward parent link is not a tree") {
  auto recs = tree_of({{0, -1}, {1, 0}}).records();
  recs[0].index_case = false;
  recs[0].parent_case = 1;
  CHECK_FALSE(TransmissionTree(recs, {1, 1}).acyclic());
}

TEST_CASE("zone attribution and the nonspatial pseudo-zone") {
  const auto world = testing::line_world(2);
  const auto tree = tree_of({{0, -1}, {1, 0}, {1, 0}, {2, 1}},
                            {}, {ChannelKind::Proximity, ChannelKind::Proximity, ChannelKind::GlobalChat, ChannelKind::DirectMessage},
                            {0, 1, 1, 0});
  TickSnapshot s;
  s.zones.resize(2);
  s.zones[0].susceptible = 10;
  s.zones[1].susceptible = 10;
  const auto rep = r0_by_zone(tree, {s}, world);
  CHECK(rep.r0.size() == 3);
  CHECK(rep.r0.at("z0") == 2.0);
  CHECK(rep.r0.at("z1") == 1.0);
  CHECK(rep.r0.at(kNonspatialZone) == 0.0);
  // ratios 0.2 and 0.1: cv = 0.05 / 0.15
  REQUIRE(rep.dispersion);
  CHECK(*rep.dispersion == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("run summary") {
  TickSnapshot a, b, c;
  a.tick = 0;
  a.zones = {{1999, 1, 0, 0}};
  b.tick = 1;
  b.zones = {{1990, 8, 1, 1}};
  c.tick = 2;
  c.zones = {{1990, 0, 8, 2}};
  const auto tree = tree_of({{0, -1}});
  auto s = run_summary({a, b, c}, tree, 2000);
  CHECK(s.attack_rate == doctest::Approx(1.0 / 2000));
  CHECK_FALSE(s.epidemic_occurred);
  CHECK(s.peak_prevalence == 8);
  CHECK(s.peak_tick == 1);
  CHECK(s.deaths == 2);
  CHECK(s.duration == 1);

  std::vector<std::pair<int, int>> all = {{0, -1}};
  for (int k = 1; k < 20; ++k) all.push_back({1, 0});
  s = run_summary({a}, tree_of(all), 20);
  CHECK(s.attack_rate == 1.0);
  CHECK(s.epidemic_occurred);

  std::ostringstream os;
  write_summary(os, run_summary({a}, tree_of({{0, -1}, {1, 0}}, {0, 0}), 2));
  CHECK(os.str().find("r0_first_generation: undefined") != std::string::npos);
}

TEST_CASE("snapshot json and totals") {
  TickSnapshot s;
  s.tick = 4;
  s.zones = {{3, 1, 0, 0, 0, 1, false}, {2, 0, 1, 1, 1, 0, true}};
  s.epicenter = ZoneId(0);
  const auto t = s.totals();
  CHECK(t.total() == 8);
  CHECK(t.infected == 1);
  const auto j = snapshot_to_json(s, std::vector<std::string>{"a", "b"});
  CHECK(j.at("tick") == 4);
  CHECK(j.at("epicenter") == "a");
  CHECK(j.dump().find("\"b\"") != std::string::npos);
}
