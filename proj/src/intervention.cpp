#include "vplague/intervention.hpp"

#include <array>

namespace vplague {

namespace {
constexpr std::array<std::string_view, 7> kKindNames = {
    "Warning", "AreaRestriction", "LiftRestriction", "CureQuest", "SymptomMask", "TemporaryCure", "Hotfix"};
}

std::string_view to_string(InterventionKind k) { return kKindNames[static_cast<std::size_t>(k)]; }

std::optional<InterventionKind> parse_intervention_kind(std::string_view s) {
  for (std::size_t i = 0; i < kKindNames.size(); ++i)
    if (kKindNames[i] == s) return static_cast<InterventionKind>(i);
  return std::nullopt;
}

std::vector<std::string> validate_intervention(const Intervention& iv, const WorldMap& world) {
  std::vector<std::string> problems;
  const std::string what(to_string(iv.kind));
  auto unit = [&](double x, const char* field) {
    if (!(x >= 0.0 && x <= 1.0)) problems.push_back(what + ": " + field + " outside [0, 1]");
  };
  auto zones_exist = [&] {
    for (const auto& z : iv.zones)
      if (!world.find(z)) problems.push_back(what + ": unknown zone '" + z + "'");
  };
  switch (iv.kind) {
    case InterventionKind::Warning:
      if (!iv.global && iv.zones.empty()) problems.push_back(what + ": audience is empty");
      zones_exist();
      unit(iv.accuracy_hint, "accuracy_hint");
      break;
    case InterventionKind::AreaRestriction:
    case InterventionKind::LiftRestriction:
      if (iv.zones.empty()) problems.push_back(what + ": zone set is empty");
      zones_exist();
      break;
    case InterventionKind::CureQuest:
      unit(iv.uptake_probability_per_tick, "uptake_probability_per_tick");
      unit(iv.efficacy, "efficacy");
      if (iv.start_tick && *iv.start_tick < 0) problems.push_back(what + ": start_tick must be >= 0");
      break;
    case InterventionKind::SymptomMask:
      unit(iv.uptake_probability_per_tick, "uptake_probability_per_tick");
      break;
    case InterventionKind::TemporaryCure:
      unit(iv.uptake_probability_per_tick, "uptake_probability_per_tick");
      unit(iv.efficacy, "efficacy");
      break;
    case InterventionKind::Hotfix:
      unit(iv.new_beta, "new_beta");
      break;
  }
  return problems;
}

}  // namespace vplague
