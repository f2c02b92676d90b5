#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "vplague/disease.hpp"
#include "vplague/types.hpp"

namespace vplague {

enum class AwarenessKind : std::uint8_t { Unaware, RumorAware, Informed };

struct AwarenessState {
  AwarenessKind kind = AwarenessKind::Unaware;
  double accuracy = 0.0;  // meaningless while Unaware, 1 when Informed
  int acquired_tick = 0;
  /// Where the avatar thinks the outbreak is. Informed avatars follow the live
  /// estimate instead; rumors carry a belief that may be wrong.
  std::optional<ZoneId> believed_epicenter;

  bool aware() const { return kind != AwarenessKind::Unaware; }
};

struct BehaviorProfile {
  double curiosity = 0.7;
  double risk_aversion = 0.3;
  double move_probability_per_tick = 0.3;
};

struct Avatar {
  AvatarId id;
  ZoneId zone;
  ZoneId home_zone;  // spawn zone; residency for area restrictions
  std::uint16_t vocation = 0;
  int level = 1;
  double heal_capability = 0.5;
  BehaviorProfile behavior;
  AwarenessState awareness;
  std::optional<InfectionState> infection;
  bool immune = false;
  std::optional<int> immune_until_tick;  // immunity ends at the start of this tick
  bool alive = true;
  bool recovered = false;  // ended an infection and has not been reinfected
  bool masked = false;     // symptom mask: hides symptoms from observers
  int carrier_ticks_remaining = 0;
  int carrier_generation = 0;
  std::uint32_t carrier_variant = 0;
  std::uint32_t carrier_case = 0;
  std::vector<PetId> pets;

  bool infected() const { return infection.has_value(); }
  bool susceptible() const { return alive && !infection && !immune; }
};

enum class PetStatus : std::uint8_t { Summoned, Dismissed };

struct Pet {
  PetId id;
  AvatarId owner;
  PetStatus status = PetStatus::Summoned;
  /// Frozen copy of the state of the avatar the pet caught the infection from.
  std::optional<InfectionState> carried_infection;
  AvatarId carried_from;
  /// Set once a carrying pet has been dismissed; resummon then starts shedding.
  bool armed = false;
  int shedding_remaining = 0;

  bool shedding() const { return status == PetStatus::Summoned && carried_infection && shedding_remaining > 0; }
};

}  // namespace vplague
