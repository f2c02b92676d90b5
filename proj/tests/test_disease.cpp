#include <doctest.h>

#include <map>

#include "support.hpp"
#include "vplague/disease.hpp"

using namespace vplague;

TEST_CASE("smallpox default is valid and has the four staged ranges") {
  const auto d = smallpox_default();
  CHECK(validate_disease(d).empty());
  REQUIRE(d.stages.size() == 4);
  CHECK(d.stages[0].duration_min_days == 3);
  CHECK(d.stages[0].duration_max_days == 3);
  CHECK(d.stages[0].cure_sensitive);
  CHECK(d.stages[1].duration_min_days == 7);
  CHECK(d.stages[1].duration_max_days == 11);
  CHECK(d.stages[2].duration_min_days == 3);
  CHECK(d.stages[2].duration_max_days == 5);
  CHECK(d.stages[3].duration_min_days == 14);
  CHECK(d.stages[3].duration_max_days == 17);
  CHECK(d.stages[3].withdrawal_window_ticks == 3);
}

TEST_CASE("validation lists all violations") {
  DiseaseDefinition d;
  auto p = validate_disease(d);
  REQUIRE_FALSE(p.empty());
  CHECK(p[0].find("no stages") != std::string::npos);

  d = smallpox_default();
  d.set_beta(ChannelKind::ZoneChat, 1.5);
  d.stages[1].duration_min_days = 12;
  d.stages[2].mortality_hazard_per_tick = -0.1;
  p = validate_disease(d);
  CHECK(p.size() == 3);
  bool named = false;
  for (const auto& s : p) named |= s.find("ZoneChat") != std::string::npos && s.find("[0, 1]") != std::string::npos;
  CHECK(named);
  CHECK_THROWS_AS(require_valid(d), ValidationError);
}

TEST_CASE("effective infectiousness is the clamped product") {
  auto d = smallpox_default();
  d.set_beta(ChannelKind::Proximity, 0.4);
  InfectionState s;
  s.stage_index = 2;
  CHECK(effective_infectiousness(s, d, ChannelKind::Proximity) == doctest::Approx(0.4));
  s.stage_index = 3;
  CHECK(effective_infectiousness(s, d, ChannelKind::Proximity) == doctest::Approx(0.1 * 0.4));
  for (std::uint32_t k : {0u, 1u}) {
    s.stage_index = k;
    for (auto c : kAllChannels) CHECK(effective_infectiousness(s, d, c) == 0.0);
  }
  d.stages[2].infectiousness_multiplier = 0.5;
  s.stage_index = 2;
  CHECK(effective_infectiousness(s, d, ChannelKind::Proximity) == doctest::Approx(0.2));
  d.stages[2].infectiousness_multiplier = 5.0;
  CHECK(effective_infectiousness(s, d, ChannelKind::Proximity) == 1.0);
}

namespace {

/// Runs courses to completion and collects the length of every stage.
std::vector<std::map<int, long>> stage_lengths(const DiseaseDefinition& d, int courses, std::uint64_t seed) {
  std::vector<std::map<int, long>> out(d.stages.size());
  Rng rng(seed);
  for (int c = 0; c < courses; ++c) {
    auto st = start_infection(d, rng, 0, 0);
    int len = 0;
    for (;;) {
      const auto stage = st.stage_index;
      const auto o = advance_infection(st, d, rng);
      ++len;
      if (o.kind != ProgressKind::Continuing || o.stage_changed) {
        ++out[stage][len];
        len = 0;
      }
      if (o.kind != ProgressKind::Continuing) break;
      st = o.state;
    }
  }
  return out;
}

}  // namespace

TEST_CASE("stage durations: fixed first stage, uniform ranges after") {
  const auto d = smallpox_default();
  const auto lengths = stage_lengths(d, 20000, 17);
  CHECK(lengths[0].size() == 1);
  CHECK(lengths[0].at(3) == 20000);
  const int lo[] = {0, 7, 3, 14}, hi[] = {0, 11, 5, 17};
  for (int s = 1; s < 4; ++s) {
    std::vector<long> counts;
    for (const auto& [len, n] : lengths[s]) {
      CHECK(len >= lo[s]);
      CHECK(len <= hi[s]);
      counts.push_back(n);
    }
    REQUIRE(counts.size() == static_cast<std::size_t>(hi[s] - lo[s] + 1));
    CHECK(testing::chi_square_uniform(counts) < testing::kChi2Crit99[counts.size() - 1]);
  }
}

TEST_CASE("no mortality hazard, no deaths; the chain is absorbing within the sum of maxima") {
  const auto d = smallpox_default();
  Rng rng(3);
  for (int c = 0; c < 2000; ++c) {
    auto st = start_infection(d, rng, 0, 0);
    int ticks = 0;
    for (;;) {
      const auto o = advance_infection(st, d, rng, 0.0);
      ++ticks;
      REQUIRE(o.kind != ProgressKind::Died);
      if (o.kind == ProgressKind::Recovered) break;
      CHECK(o.state.ticks_in_stage <= o.state.scheduled_stage_duration);
      st = o.state;
    }
    CHECK(ticks <= d.max_course_ticks());
  }
}

TEST_CASE("mortality hazard is mitigated by heal capability") {
  DiseaseDefinition d = testing::flat_disease();
  d.stages[0].mortality_hazard_per_tick = 0.2;
  d.heal_mitigation = 1.0;
  Rng rng(1);
  int deaths_unhealed = 0, deaths_healed = 0;
  for (int i = 0; i < 20000; ++i) {
    auto st = start_infection(d, rng, 0, 0);
    deaths_unhealed += advance_infection(st, d, rng, 0.0).kind == ProgressKind::Died;
    deaths_healed += advance_infection(st, d, rng, 1.0).kind == ProgressKind::Died;
  }
  CHECK(deaths_unhealed / 20000.0 == doctest::Approx(0.2).epsilon(0.05));
  CHECK(deaths_healed == 0);
}

TEST_CASE("geometric stage has mean 1/p") {
  DiseaseDefinition d;
  StageSpec s;
  s.name = "g";
  s.duration_kind = DurationKind::Geometric;
  s.exit_probability_per_tick = 0.2;
  d.stages = {s};
  Rng rng(8);
  double sum = 0.0;
  for (int i = 0; i < 100000; ++i) sum += draw_stage_duration(d.stages[0], rng);
  CHECK(sum / 100000 == doctest::Approx(5.0).epsilon(0.02));
}

TEST_CASE("same seed, same trajectory") {
  const auto d = smallpox_default();
  Rng a(99), b(99);
  auto sa = start_infection(d, a, 0, 0);
  auto sb = start_infection(d, b, 0, 0);
  for (int t = 0; t < 40; ++t) {
    const auto oa = advance_infection(sa, d, a, 0.3);
    const auto ob = advance_infection(sb, d, b, 0.3);
    REQUIRE(oa.kind == ob.kind);
    if (oa.kind != ProgressKind::Continuing) break;
    CHECK(oa.state == ob.state);
    sa = oa.state;
    sb = ob.state;
  }
}

TEST_CASE("mutation") {
  auto d = smallpox_default();
  Rng rng(4);
  SUBCASE("no policy, no change") {
    for (int i = 0; i < 100; ++i) CHECK(mutate_disease(d, rng).name == d.name);
  }
  SUBCASE("zero probability, identical definition") {
    d.mutation = MutationPolicy{0.0, 0.5, 0.5};
    for (int i = 0; i < 100; ++i) {
      const auto m = mutate_disease(d, rng);
      CHECK(m.name == d.name);
      CHECK(m.beta_by_channel == d.beta_by_channel);
    }
  }
  SUBCASE("zero perturbation keeps beta") {
    d.mutation = MutationPolicy{1.0, 0.0, 0.0};
    const auto m = mutate_disease(d, rng);
    CHECK(m.mutation_count == 1);
    CHECK(m.name != d.name);
    CHECK(m.beta_by_channel == d.beta_by_channel);
  }
  SUBCASE("perturbed beta stays within [(1-f)b, 1]") {
    d.mutation = MutationPolicy{1.0, 0.5, 0.0};
    d.set_beta(ChannelKind::Proximity, 0.9);
    bool hit_clamp = false;
    for (int i = 0; i < 10000; ++i) {
      const double b = mutate_disease(d, rng).beta(ChannelKind::Proximity);
      REQUIRE(b >= 0.45);
      REQUIRE(b <= 1.0);
      hit_clamp |= b == 1.0;
    }
    CHECK(hit_clamp);
  }
}
