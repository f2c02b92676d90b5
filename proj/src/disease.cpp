#include "vplague/disease.hpp"

#include <algorithm>
#include <cmath>

namespace vplague {

namespace {

bool in_unit(double x) { return x >= 0.0 && x <= 1.0; }

double clamp01(double x) { return std::min(std::max(x, 0.0), 1.0); }

}  // namespace

int DiseaseDefinition::max_course_ticks() const {
  int total = 0;
  for (const auto& s : stages) total += std::max(1, s.duration_max_days);
  return total;
}

std::vector<std::string> validate_disease(const DiseaseDefinition& def) {
  std::vector<std::string> problems;
  const std::string where = "disease '" + def.name + "'";
  if (def.stages.empty()) problems.push_back(where + ": no stages");
  for (std::size_t i = 0; i < def.stages.size(); ++i) {
    const auto& s = def.stages[i];
    const std::string at = where + " stage " + std::to_string(i) + " (" + s.name + ")";
    if (s.duration_kind == DurationKind::Uniform) {
      if (s.duration_min_days < 0) problems.push_back(at + ": duration_min must be >= 0");
      if (s.duration_max_days < 1) problems.push_back(at + ": duration_max must be positive");
      if (s.duration_min_days > s.duration_max_days)
        problems.push_back(at + ": duration_min " + std::to_string(s.duration_min_days) + " exceeds duration_max " +
                           std::to_string(s.duration_max_days));
    } else if (!(s.exit_probability_per_tick > 0.0 && s.exit_probability_per_tick <= 1.0)) {
      problems.push_back(at + ": exit_probability must be in (0, 1]");
    }
    if (!(s.infectiousness_multiplier >= 0.0)) problems.push_back(at + ": infectiousness multiplier must be >= 0");
    if (!in_unit(s.mobility_modifier)) problems.push_back(at + ": mobility modifier outside [0, 1]");
    if (!in_unit(s.withdrawal_probability_per_tick)) problems.push_back(at + ": withdrawal probability outside [0, 1]");
    if (s.withdrawal_window_ticks < 0) problems.push_back(at + ": withdrawal window must be >= 0");
    if (!in_unit(s.mortality_hazard_per_tick)) problems.push_back(at + ": mortality hazard outside [0, 1]");
  }
  for (ChannelKind c : kAllChannels) {
    const double b = def.beta(c);
    if (!in_unit(b))
      problems.push_back(where + ": beta for channel " + std::string(to_string(c)) + " is " + std::to_string(b) +
                         ", must be within [0, 1]");
  }
  if (def.immunity_duration_ticks && *def.immunity_duration_ticks < 1)
    problems.push_back(where + ": immunity duration must be a positive tick count");
  if (def.carrier_ticks < 0) problems.push_back(where + ": carrier ticks must be >= 0");
  if (!(def.carrier_infectiousness_multiplier >= 0.0))
    problems.push_back(where + ": carrier infectiousness must be >= 0");
  if (!in_unit(def.heal_mitigation)) problems.push_back(where + ": heal mitigation outside [0, 1]");
  if (def.mutation) {
    const auto& m = *def.mutation;
    if (!in_unit(m.per_tick_probability)) problems.push_back(where + ": mutation probability outside [0, 1]");
    if (!in_unit(m.beta_perturbation_fraction)) problems.push_back(where + ": mutation beta fraction outside [0, 1]");
    if (!in_unit(m.severity_perturbation_fraction))
      problems.push_back(where + ": mutation severity fraction outside [0, 1]");
  }
  return problems;
}

void require_valid(const DiseaseDefinition& def) {
  auto problems = validate_disease(def);
  if (!problems.empty()) throw ValidationError(std::move(problems));
}

int draw_stage_duration(const StageSpec& stage, Rng& rng) {
  if (stage.duration_kind == DurationKind::Geometric) {
    const auto extra = rng.geometric(stage.exit_probability_per_tick);
    return static_cast<int>(std::min<std::int64_t>(1 + extra, 1'000'000));
  }
  const auto d = rng.uniform_int(stage.duration_min_days, stage.duration_max_days);
  return std::max<int>(1, static_cast<int>(d));
}

InfectionState start_infection(const DiseaseDefinition& def, Rng& rng, int tick, int generation,
                               std::optional<AvatarId> infector, std::optional<ChannelKind> channel,
                               std::uint32_t variant) {
  InfectionState s;
  s.stage_index = 0;
  s.ticks_in_stage = 0;
  s.scheduled_stage_duration = draw_stage_duration(def.stages.front(), rng);
  s.generation = generation;
  s.infector = infector;
  s.channel_of_infection = channel;
  s.tick_of_infection = tick;
  s.variant = variant;
  return s;
}

ProgressOutcome advance_infection(const InfectionState& state, const DiseaseDefinition& def, Rng& rng,
                                  double heal_capability) {
  ProgressOutcome out;
  out.state = state;
  const StageSpec& stage = def.stages.at(state.stage_index);

  const double hazard =
      stage.mortality_hazard_per_tick * (1.0 - def.heal_mitigation * clamp01(heal_capability));
  if (rng.bernoulli(hazard)) {
    out.kind = ProgressKind::Died;
    return out;
  }

  ++out.state.ticks_in_stage;
  if (out.state.ticks_in_stage < out.state.scheduled_stage_duration) return out;

  const std::uint32_t next = state.stage_index + 1;
  if (next >= def.stages.size()) {
    out.kind = ProgressKind::Recovered;
    return out;
  }
  out.stage_changed = true;
  out.state.stage_index = next;
  out.state.ticks_in_stage = 0;
  out.state.scheduled_stage_duration = draw_stage_duration(def.stages[next], rng);
  return out;
}

double effective_infectiousness(const InfectionState& state, const DiseaseDefinition& def, ChannelKind channel) {
  if (state.stage_index >= def.stages.size()) return 0.0;
  return clamp01(def.beta(channel) * def.stages[state.stage_index].infectiousness_multiplier);
}

DiseaseDefinition mutate_disease(const DiseaseDefinition& def, Rng& rng) {
  if (!def.mutation || !rng.bernoulli(def.mutation->per_tick_probability)) return def;
  const auto& policy = *def.mutation;
  DiseaseDefinition variant = def;
  ++variant.mutation_count;
  const double fb = policy.beta_perturbation_fraction;
  for (auto& b : variant.beta_by_channel) b = clamp01(b * rng.uniform(1.0 - fb, 1.0 + fb));
  const double fs = policy.severity_perturbation_fraction;
  for (auto& s : variant.stages)
    s.mortality_hazard_per_tick = clamp01(s.mortality_hazard_per_tick * rng.uniform(1.0 - fs, 1.0 + fs));
  const auto base = def.name.substr(0, def.name.find("~m"));
  variant.name = base + "~m" + std::to_string(variant.mutation_count);
  return variant;
}

DiseaseDefinition smallpox_default() {
  DiseaseDefinition d;
  d.name = "smallpox";
  StageSpec s1;
  s1.name = "incubating_sensitive";
  s1.duration_min_days = s1.duration_max_days = 3;
  s1.cure_sensitive = true;

  StageSpec s2;
  s2.name = "incubating_insensitive";
  s2.duration_min_days = 7;
  s2.duration_max_days = 11;

  StageSpec s3;
  s3.name = "prodromal";
  s3.duration_min_days = 3;
  s3.duration_max_days = 5;
  s3.infectiousness_multiplier = 1.0;

  StageSpec s4;
  s4.name = "symptomatic";
  s4.duration_min_days = 14;
  s4.duration_max_days = 17;
  s4.infectiousness_multiplier = 0.1;
  s4.symptoms_visible = true;
  s4.mobility_modifier = 0.5;
  s4.withdrawal_probability_per_tick = 0.9;
  s4.withdrawal_window_ticks = 3;

  d.stages = {s1, s2, s3, s4};
  d.set_beta(ChannelKind::Proximity, 0.0006);
  d.set_beta(ChannelKind::PetVector, 0.0);
  return d;
}

}  // namespace vplague
