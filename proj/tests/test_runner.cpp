#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <sstream>

#include "support.hpp"
#include "vplague/runner.hpp"

using namespace vplague;

namespace {

std::vector<std::uint64_t> seed_range(std::uint64_t first, std::uint64_t n) {
  std::vector<std::uint64_t> s(n);
  std::iota(s.begin(), s.end(), first);
  return s;
}

ScenarioConfig small_baseline() {
  auto c = testing::bundled("homogeneous-baseline");
  c.population.count = 400;
  c.disease.set_beta(ChannelKind::Proximity, 0.001);
  return c;
}

}  // namespace

TEST_CASE("describe") {
  const auto s = describe({1.0, 2.0, 3.0, 4.0});
  CHECK(s.n == 4);
  CHECK(s.mean == 2.5);
  CHECK(s.stddev == doctest::Approx(1.2909944487358056));
  CHECK(describe({5.0}).stddev == 0.0);
  CHECK(describe({}).n == 0);
}

TEST_CASE("run_scenario matches a direct simulation") {
  const auto c = testing::bundled("gray-plague");
  RunOptions o;
  o.seed = 21;
  o.events = true;
  const auto r = run_scenario(c, o);
  Simulation sim(c, SimOptions{21, true});
  sim.run_to_end();
  CHECK(r.snapshots == sim.state().snapshots);
  CHECK(r.events == sim.state().log.lines());
  CHECK(r.seed == 21);
  CHECK(r.population == static_cast<std::size_t>(c.population.count));
  CHECK(r.summary.attack_rate == doctest::Approx(static_cast<double>(r.tree.size()) / c.population.count).epsilon(0.2));
}

TEST_CASE("batch aggregates are consistent and independent of order and threads") {
  const auto c = small_baseline();
  const auto seeds = seed_range(100, 24);
  const auto one = run_batch(c, seeds, 1);
  const auto four = run_batch(c, seeds, 4);
  auto shuffled = seeds;
  std::reverse(shuffled.begin(), shuffled.end());
  const auto rev = run_batch(c, shuffled, 3);

  REQUIRE(one.runs.size() == seeds.size());
  for (std::size_t k = 0; k < seeds.size(); ++k) {
    CHECK(one.runs[k].seed == seeds[k]);
    CHECK(four.runs[k].summary.attack_rate == one.runs[k].summary.attack_rate);
    CHECK(four.runs[k].summary.peak_tick == one.runs[k].summary.peak_tick);
  }
  CHECK(one.attack_rate.mean == four.attack_rate.mean);
  CHECK(rev.attack_rate.mean == doctest::Approx(one.attack_rate.mean).epsilon(1e-12));
  CHECK(rev.r0_first_generation.mean == doctest::Approx(one.r0_first_generation.mean).epsilon(1e-12));

  std::vector<double> ar;
  int epidemics = 0;
  for (const auto& r : one.runs) {
    ar.push_back(r.summary.attack_rate);
    epidemics += r.summary.epidemic_occurred;
    CHECK(r.summary.attack_rate >= 0.0);
    CHECK(r.summary.attack_rate <= 1.0);
    CHECK(r.summary.peak_prevalence <= c.population.count);
  }
  CHECK(one.attack_rate.mean == doctest::Approx(describe(ar).mean));
  CHECK(one.epidemic_fraction == doctest::Approx(static_cast<double>(epidemics) / seeds.size()));
  CHECK(one.attack_rate.n == 24);

  std::ostringstream os;
  write_batch(os, one);
  CHECK(os.str().find("epidemic_fraction") != std::string::npos);
}

TEST_CASE("epidemics are rarer below threshold") {
  auto lo = small_baseline();
  lo.disease.set_beta(ChannelKind::Proximity, 0.0002);  // R0 0.4
  auto hi = small_baseline();
  hi.disease.set_beta(ChannelKind::Proximity, 0.0015);  // R0 3
  lo.index_cases.count = hi.index_cases.count = 1;
  const auto seeds = seed_range(1, 60);
  CHECK(run_batch(lo, seeds).epidemic_fraction < run_batch(hi, seeds).epidemic_fraction);
}

TEST_CASE("batch errors surface") {
  auto c = small_baseline();
  c.disease.stages.clear();
  CHECK_THROWS_AS(run_batch(c, seed_range(1, 3), 2), ScenarioError);
}

TEST_CASE("first-generation R0 is monotone in beta") {
  const auto c = small_baseline();
  const auto seeds = seed_range(1, 30);
  const auto a = first_generation_r0(c, ChannelKind::Proximity, 0.0005, seeds);
  const auto b = first_generation_r0(c, ChannelKind::Proximity, 0.002, seeds);
  REQUIRE(a);
  REQUIRE(b);
  CHECK(*a < *b);
  CHECK(*first_generation_r0(c, ChannelKind::Proximity, 0.0, seeds) == 0.0);
}

TEST_CASE("tuning") {
  const auto c = small_baseline();
  const auto seeds = seed_range(1, 40);
  SUBCASE("target zero") {
    const auto t = tune_beta_for_target_r0(c, ChannelKind::Proximity, 0.0, seeds);
    CHECK(t.beta == 0.0);
    CHECK(t.converged);
  }
  SUBCASE("target one") {
    const auto t = tune_beta_for_target_r0(c, ChannelKind::Proximity, 1.0, seeds, 0.1);
    CHECK(t.converged);
    REQUIRE(t.achieved_r0);
    CHECK(std::abs(*t.achieved_r0 - 1.0) <= 0.1);
    CHECK(t.iterations <= 20);
    CHECK(*first_generation_r0(c, ChannelKind::Proximity, t.beta, seeds) == *t.achieved_r0);
  }
  SUBCASE("unreachable target returns the best evaluation") {
    const auto t = tune_beta_for_target_r0(c, ChannelKind::Proximity, 1e6, seeds, 0.05, 6);
    CHECK_FALSE(t.converged);
    // beta = 1 already falls short, nothing to bisect
    CHECK(t.iterations == 1);
    CHECK(t.beta == 1.0);
    REQUIRE(t.achieved_r0);
    CHECK(*t.achieved_r0 > 1.0);
  }
  SUBCASE("iteration cap") {
    const auto t = tune_beta_for_target_r0(c, ChannelKind::Proximity, 1.0, seeds, 1e-9, 5);
    CHECK_FALSE(t.converged);
    CHECK(t.iterations == 5);
    REQUIRE(t.achieved_r0);
    CHECK(t.beta == 0.0625);  // closest of 1, 1/2, 1/4, 1/8, 1/16
  }
  SUBCASE("bad requests") {
    CHECK_THROWS_AS(tune_beta_for_target_r0(c, ChannelKind::Proximity, -1.0, seeds), std::invalid_argument);
    CHECK(unusable_channel(c, ChannelKind::PetVector));
    CHECK_THROWS_AS(tune_beta_for_target_r0(c, ChannelKind::PetVector, 1.0, seeds), std::invalid_argument);
    CHECK_FALSE(unusable_channel(c, ChannelKind::Proximity));
  }
}
