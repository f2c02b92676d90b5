#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "vplague/population.hpp"
#include "vplague/scenario.hpp"
#include "vplague/transmission.hpp"
#include "vplague/world.hpp"

namespace testing {

using namespace vplague;

// Upper 1% points of the chi-square distribution, df = 1..4 (scipy.stats.chi2.ppf(0.99, df)).
inline constexpr double kChi2Crit99[] = {0.0, 6.6348966010212145, 9.21034037197618, 11.344866730144373,
                                         13.276704135987622};
// scipy.stats.t.ppf(0.99, 99)
inline constexpr double kTCrit99Df99 = 2.364605861786943;

inline double chi_square_uniform(const std::vector<long>& counts) {
  long n = 0;
  for (long c : counts) n += c;
  const double expected = static_cast<double>(n) / counts.size();
  double x = 0.0;
  for (long c : counts) x += (c - expected) * (c - expected) / expected;
  return x;
}

inline WorldMap line_world(int zones) {
  WorldSpec spec;
  for (int i = 0; i < zones; ++i) {
    ZoneSpec z{"z" + std::to_string(i), 1.0, false, {}};
    if (i + 1 < zones) z.adjacent.push_back("z" + std::to_string(i + 1));
    spec.zones.push_back(z);
  }
  return build_world(spec);
}

/// Hand-placed avatars, everyone alive, susceptible and resident where placed.
inline Population place_avatars(const std::vector<int>& zones) {
  Population pop;
  pop.social = SocialGraph(zones.size());
  pop.vocation_labels = {"warrior"};
  for (std::size_t i = 0; i < zones.size(); ++i) {
    Avatar a;
    a.id = AvatarId(static_cast<std::uint32_t>(i));
    a.zone = a.home_zone = ZoneId(static_cast<std::uint32_t>(zones[i]));
    pop.avatars.push_back(a);
  }
  return pop;
}

/// One infectious stage, multiplier 1, long enough to never end in a test.
inline DiseaseDefinition flat_disease(double beta_all = 0.0) {
  DiseaseDefinition d;
  d.name = "flat";
  StageSpec s;
  s.name = "sick";
  s.duration_min_days = s.duration_max_days = 1000;
  s.infectiousness_multiplier = 1.0;
  d.stages = {s};
  for (auto c : kAllChannels) d.set_beta(c, beta_all);
  return d;
}

inline void make_infectious(Avatar& a, std::uint32_t case_id = 0) {
  InfectionState st;
  st.scheduled_stage_duration = 1000;
  st.case_id = case_id;
  a.infection = st;
}

inline ActivityFrame quiet_activity(const Population& pop) {
  ActivityFrame f;
  f.withdrawn.assign(pop.size(), 0);
  f.zone_chat.assign(pop.size(), 0);
  f.global_chat.assign(pop.size(), 0);
  return f;
}

inline ScenarioConfig bundled(const std::string& name) { return load_scenario(resolve_scenario_path(name)); }

}  // namespace testing
