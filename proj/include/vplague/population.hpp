#pragma once

#include <string>
#include <vector>

#include "vplague/agent.hpp"
#include "vplague/rng.hpp"
#include "vplague/world.hpp"

namespace vplague {

/// Directed messaging relationships.
class SocialGraph {
public:
  SocialGraph() = default;
  explicit SocialGraph(std::size_t n) : out_(n) {}

  std::size_t size() const { return out_.size(); }
  const std::vector<AvatarId>& out(AvatarId a) const { return out_.at(a.index()); }
  std::size_t edge_count() const;
  bool has_edge(AvatarId from, AvatarId to) const;
  /// Rejects self-edges and out-of-range endpoints; keeps lists sorted.
  void add_edge(AvatarId from, AvatarId to);

private:
  std::vector<std::vector<AvatarId>> out_;
};

struct VocationSpec {
  std::string label;
  double weight = 1.0;
  double heal_min = 0.0;
  double heal_max = 1.0;
};

struct BehaviorSpec {
  double curiosity_mean = 0.7;
  double risk_aversion_mean = 0.3;
  /// Traits are uniform on [mean - spread, mean + spread], clipped to [0, 1].
  double trait_spread = 0.3;
  double move_probability = 0.3;
};

struct PopulationSpec {
  int count = 2000;
  std::vector<VocationSpec> vocations = {
      {"warrior", 1.0, 0.0, 0.4}, {"mage", 1.0, 0.2, 0.6}, {"priest", 1.0, 0.6, 1.0}, {"rogue", 1.0, 0.0, 0.5}};
  int level_min = 1;
  int level_max = 60;
  double social_degree_mean = 4.0;
  double pets_per_avatar_mean = 0.3;
  BehaviorSpec behavior;
};

std::vector<std::string> validate_population_spec(const PopulationSpec& spec);

struct Population {
  std::vector<Avatar> avatars;
  std::vector<Pet> pets;
  SocialGraph social;
  std::vector<std::string> vocation_labels;

  std::size_t size() const { return avatars.size(); }
  Avatar& avatar(AvatarId id) { return avatars.at(id.index()); }
  const Avatar& avatar(AvatarId id) const { return avatars.at(id.index()); }
  Pet& pet(PetId id) { return pets.at(id.index()); }
  const Pet& pet(PetId id) const { return pets.at(id.index()); }
};

/// Zones drawn proportionally to density weight; heal capability uniform on
/// the vocation's range; social graph with independent directed edges at
/// probability mean_degree / (n - 1). Same seed and spec, same population.
Population generate_population(const PopulationSpec& spec, const WorldMap& world, Rng& rng);

}  // namespace vplague
