#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "vplague/population.hpp"
#include "vplague/world.hpp"

namespace vplague {

using VariantTable = std::vector<DiseaseDefinition>;

struct ChannelParams {
  double zone_chat_participation = 0.8;
  double global_chat_participation = 0.2;
  double message_send_probability = 0.5;
  int pet_shedding_ticks = 3;
  double pet_dismiss_probability = 0.05;
  double pet_resummon_probability = 0.2;
};

std::vector<std::string> validate_channel_params(const ChannelParams& p);

/// Per-tick behavioral draws that contact enumeration depends on. Drawn once,
/// in avatar-id order, so enumeration itself never touches the RNG.
struct ActivityFrame {
  std::vector<std::uint8_t> withdrawn;
  std::vector<std::uint8_t> zone_chat;
  std::vector<std::uint8_t> global_chat;
  /// (sender, recipient), sorted by recipient then sender.
  std::vector<std::pair<AvatarId, AvatarId>> messages;
};

ActivityFrame draw_activity(const Population& pop, const VariantTable& variants, const ChannelParams& params,
                            Rng& rng);

/// Avatars shed while infected in a stage with positive multiplier, or as an
/// immune carrier.
bool is_infectious(const Avatar& a, const VariantTable& variants);
double source_infectiousness(const Avatar& a, const VariantTable& variants, ChannelKind channel);
bool is_withdrawing(const Avatar& a, const VariantTable& variants);

struct ContactSource {
  enum class Kind : std::uint8_t { Avatar, Pet };
  Kind kind = Kind::Avatar;
  std::uint32_t id = 0;

  static ContactSource avatar(AvatarId a) { return {Kind::Avatar, a.value}; }
  static ContactSource pet(PetId p) { return {Kind::Pet, p.value}; }
  friend auto operator<=>(const ContactSource&, const ContactSource&) = default;
};

struct ContactEvent {
  ContactSource source;
  AvatarId target;
  ChannelKind channel = ChannelKind::Proximity;
  int tick = 0;
};

struct InfectionRecord {
  AvatarId infectee;
  ContactSource infector;
  /// Avatar credited in the transmission tree: the infector itself, or the
  /// avatar a pet caught the infection from. Absent for index cases.
  std::optional<AvatarId> parent;
  ChannelKind channel = ChannelKind::Proximity;
  int tick = 0;
  int generation = 0;
  ZoneId zone;
  std::uint32_t variant = 0;
  /// Position in the run's record list; the infector's episode, if any.
  std::uint32_t case_id = 0;
  std::optional<std::uint32_t> parent_case;
  bool index_case = false;
};

/// Materialized contact list, ordered by target, then channel, then source.
/// Restricted zones admit Proximity/ZoneChat contacts only between residents.
std::vector<ContactEvent> enumerate_contacts(const WorldMap& world, const Population& pop,
                                             const VariantTable& variants, const ActivityFrame& activity, int tick);

double contact_infectiousness(const ContactEvent& c, const Population& pop, const VariantTable& variants);

/// 1 - prod(1 - p_i) over contacts sharing one target and tick.
double exposure_probability(std::span<const ContactEvent> contacts_on_target, const Population& pop,
                            const VariantTable& variants);

/// Reference resolution over a materialized contact list. Infects targets in
/// place and returns the records. Consumes the RNG exactly like ExposureField.
std::vector<InfectionRecord> resolve_exposures(std::span<const ContactEvent> contacts, Population& pop,
                                               const VariantTable& variants, Rng& rng, int tick);

/// Aggregated form of the same contact rules: per-zone and per-channel source
/// blocks, so a zone's proximity exposure is one survival product instead of
/// a pair list. Read-only over the population once built.
class ExposureField {
public:
  ExposureField(const WorldMap& world, const Population& pop, const VariantTable& variants,
                const ActivityFrame& activity);

  double probability(const Avatar& target) const;
  std::array<std::uint64_t, kChannelCount> contact_counts() const { return contact_counts_; }

  std::vector<InfectionRecord> resolve(Population& pop, const VariantTable& variants, Rng& rng, int tick) const;

private:
  struct Block {
    std::vector<ContactSource> sources;
    std::vector<double> weight;
    std::vector<double> prefix;
    double survival = 1.0;
    void finish();
  };
  struct TargetBlocks {
    std::array<const Block*, kChannelCount> blocks{};
  };
  TargetBlocks blocks_for(const Avatar& target) const;

  const WorldMap& world_;
  const Population& pop_;
  const ActivityFrame& activity_;
  std::vector<Block> proximity_resident_, proximity_all_, chat_resident_, chat_all_, pets_;
  Block global_;
  std::vector<Block> messages_;  // per target avatar
  std::array<std::uint64_t, kChannelCount> contact_counts_{};
};

// Pet reservoir mechanics.

/// A summoned pet without a carried infection catches one from co-located
/// infectious avatars with the composed PetVector probability.
bool pet_expose(Pet& pet, std::span<const AvatarId> colocated_sources, const Population& pop,
                const VariantTable& variants, Rng& rng);
void pet_dismiss(Pet& pet);
void pet_resummon(Pet& pet, int shedding_ticks);
/// End-of-tick shedding countdown; clears the snapshot when it runs out.
void pet_tick(Pet& pet);

}  // namespace vplague
