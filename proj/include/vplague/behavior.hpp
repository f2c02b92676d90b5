#pragma once

#include <optional>
#include <vector>

#include "vplague/transmission.hpp"

namespace vplague {

struct InfoParams {
  /// Chance per tick that an unaware avatar notices visible symptoms around it.
  double observe_probability = 0.5;
  /// Per-contact chance that a rumor passes on a chat or message contact.
  double beta_info = 0.3;
  /// Accuracy multiplier per rumor hop.
  double decay = 0.8;
};

std::vector<std::string> validate_info_params(const InfoParams& p);

/// Zone with the most visible, unmasked symptomatic avatars; lowest id wins
/// ties; nothing when no symptoms are visible anywhere.
std::optional<ZoneId> estimate_epicenter(const WorldMap& world, const Population& pop, const VariantTable& variants);

bool shows_symptoms(const Avatar& a, const VariantTable& variants);

struct AwarenessChange {
  AvatarId avatar;
  AwarenessState before;
  AwarenessState after;
};

/// Observation of visible symptoms, then one hop of rumor spread over zone
/// chat, global chat and messages. Senders are the avatars aware at the start
/// of the call, so a rumor advances at most one hop per tick.
std::vector<AwarenessChange> spread_information(const WorldMap& world, Population& pop, const VariantTable& variants,
                                                const ActivityFrame& activity, const InfoParams& params,
                                                std::optional<ZoneId> epicenter, Rng& rng, int tick);

/// Marks the avatar Informed with full accuracy.
AwarenessChange inform(Avatar& a, int tick);

/// The zone the avatar steers by, if any.
std::optional<ZoneId> believed_epicenter(const Avatar& a, std::optional<ZoneId> live_epicenter);

/// Stay (nullopt) or the zone to move to this tick.
std::optional<ZoneId> decide_move(const Avatar& a, const WorldMap& world, std::optional<ZoneId> epicenter,
                                  const VariantTable& variants, bool withdrawn, Rng& rng);

}  // namespace vplague
