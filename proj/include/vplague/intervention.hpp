#pragma once

#include <optional>
#include <string>
#include <vector>

#include "vplague/types.hpp"
#include "vplague/world.hpp"

namespace vplague {

enum class InterventionKind : std::uint8_t {
  Warning,
  AreaRestriction,
  LiftRestriction,
  CureQuest,
  SymptomMask,
  TemporaryCure,
  Hotfix
};

std::string_view to_string(InterventionKind k);
std::optional<InterventionKind> parse_intervention_kind(std::string_view s);

/// A developer command. Only the fields of its kind are meaningful.
struct Intervention {
  InterventionKind kind = InterventionKind::Warning;
  /// Warning audience; empty with `global` set means everyone.
  bool global = false;
  std::vector<std::string> zones;  // Warning audience or restriction targets
  double accuracy_hint = 1.0;      // reserved; warnings always carry the truth
  std::optional<int> start_tick;   // CureQuest: quest opens at this tick
  double uptake_probability_per_tick = 0.0;
  double efficacy = 1.0;
  bool grants_immunity = false;
  bool requires_cure_sensitive_stage = false;
  ChannelKind channel = ChannelKind::Proximity;  // Hotfix
  double new_beta = 0.0;                         // Hotfix

  friend bool operator==(const Intervention&, const Intervention&) = default;
};

/// Parameter and zone checks against a world. Empty when acceptable.
std::vector<std::string> validate_intervention(const Intervention& iv, const WorldMap& world);

struct ScheduledIntervention {
  int tick = 0;
  Intervention intervention;
};

/// Ongoing per-tick effect left behind by CureQuest, SymptomMask and
/// TemporaryCure.
struct Program {
  InterventionKind kind;
  int start_tick = 0;
  double uptake = 0.0;
  double efficacy = 1.0;
  bool grants_immunity = false;
  bool requires_cure_sensitive_stage = false;
};

}  // namespace vplague
