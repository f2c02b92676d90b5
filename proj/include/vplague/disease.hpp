#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "vplague/rng.hpp"
#include "vplague/types.hpp"

namespace vplague {

enum class DurationKind : std::uint8_t { Uniform, Geometric };

struct StageSpec {
  std::string name;
  DurationKind duration_kind = DurationKind::Uniform;
  int duration_min_days = 1;
  int duration_max_days = 1;
  /// Geometric stages: per-tick exit probability, mean duration 1/p ticks.
  double exit_probability_per_tick = 1.0;
  double infectiousness_multiplier = 0.0;
  bool symptoms_visible = false;
  double mobility_modifier = 1.0;
  double withdrawal_probability_per_tick = 0.0;
  /// Withdrawal applies during the first N ticks of the stage; 0 = whole stage.
  int withdrawal_window_ticks = 0;
  double mortality_hazard_per_tick = 0.0;
  bool cure_sensitive = false;
};

struct MutationPolicy {
  double per_tick_probability = 0.0;
  double beta_perturbation_fraction = 0.0;
  double severity_perturbation_fraction = 0.0;
};

struct DiseaseDefinition {
  std::string name;
  std::vector<StageSpec> stages;
  std::array<double, kChannelCount> beta_by_channel{};
  bool grants_immunity_on_recovery = true;
  std::optional<int> immunity_duration_ticks;  // absent = permanent
  bool immune_can_transmit = false;
  int carrier_ticks = 0;
  double carrier_infectiousness_multiplier = 0.0;
  /// Mortality hazard is scaled by (1 - heal_mitigation * heal_capability).
  double heal_mitigation = 0.0;
  std::optional<MutationPolicy> mutation;
  int mutation_count = 0;

  double beta(ChannelKind c) const { return beta_by_channel[channel_index(c)]; }
  void set_beta(ChannelKind c, double b) { beta_by_channel[channel_index(c)] = b; }
  /// Largest possible per-tick exit horizon: sum of duration maxima.
  int max_course_ticks() const;
};

struct InfectionState {
  std::uint32_t stage_index = 0;
  int ticks_in_stage = 0;
  int scheduled_stage_duration = 1;
  int generation = 0;
  std::optional<AvatarId> infector;
  std::optional<ChannelKind> channel_of_infection;
  int tick_of_infection = 0;
  /// Index into the run's variant table (mutation lineage).
  std::uint32_t variant = 0;
  /// Index of this episode's InfectionRecord within its run.
  std::uint32_t case_id = 0;

  friend bool operator==(const InfectionState&, const InfectionState&) = default;
};

enum class ProgressKind : std::uint8_t { Continuing, Recovered, Died };

struct ProgressOutcome {
  ProgressKind kind = ProgressKind::Continuing;
  InfectionState state;
  bool stage_changed = false;
};

/// Every invariant violation; empty when valid.
std::vector<std::string> validate_disease(const DiseaseDefinition& def);
/// Throws ValidationError when validate_disease reports anything.
void require_valid(const DiseaseDefinition& def);

int draw_stage_duration(const StageSpec& stage, Rng& rng);

InfectionState start_infection(const DiseaseDefinition& def, Rng& rng, int tick, int generation,
                               std::optional<AvatarId> infector = std::nullopt,
                               std::optional<ChannelKind> channel = std::nullopt,
                               std::uint32_t variant = 0);

/// One tick of the per-agent Markov chain: mortality hazard, then stage clock.
ProgressOutcome advance_infection(const InfectionState& state, const DiseaseDefinition& def, Rng& rng,
                                  double heal_capability = 0.0);

double effective_infectiousness(const InfectionState& state, const DiseaseDefinition& def, ChannelKind channel);

/// With the policy's per-tick probability returns a perturbed variant,
/// otherwise `def` unchanged. Definitions without a policy never mutate.
DiseaseDefinition mutate_disease(const DiseaseDefinition& def, Rng& rng);

/// Four-stage smallpox-style course: two incubating stages, prodromal,
/// symptomatic at a tenth of prodromal infectiousness with withdrawal during
/// its first three days.
DiseaseDefinition smallpox_default();

}  // namespace vplague
