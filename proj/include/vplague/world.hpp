#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "vplague/types.hpp"

namespace vplague {

struct Zone {
  ZoneId id;
  std::string name;
  double density_weight = 1.0;
  std::vector<ZoneId> adjacent;        // sorted, symmetric
  std::vector<ZoneId> teleport_links;  // sorted, symmetric
  bool restricted = false;
  bool is_city = false;
};

struct ZoneSpec {
  std::string name;
  double density_weight = 1.0;
  bool is_city = false;
  std::vector<std::string> adjacent;
};

struct WorldSpec {
  std::vector<ZoneSpec> zones;
  std::vector<std::pair<std::string, std::string>> teleports;
};

/// Zone graph with symmetric adjacency and teleport links. Restriction is a
/// per-zone flag; restricted zones stay in the graph.
class WorldMap {
public:
  WorldMap() = default;

  std::size_t size() const { return zones_.size(); }
  const std::vector<Zone>& zones() const { return zones_; }
  const Zone& zone(ZoneId id) const { return zones_.at(id.index()); }

  std::optional<ZoneId> find(std::string_view name) const;

  /// Adjacent and teleport destinations, merged, sorted, no duplicates.
  const std::vector<ZoneId>& neighbors(ZoneId id) const { return neighbors_.at(id.index()); }

  /// Hops over adjacency and teleport links; -1 when unreachable.
  int hop_distance(ZoneId a, ZoneId b) const {
    return distance_[a.index() * zones_.size() + b.index()];
  }

  bool restricted(ZoneId id) const { return zones_.at(id.index()).restricted; }
  void set_restricted(ZoneId id, bool value) { zones_.at(id.index()).restricted = value; }

  double total_density() const;

  friend WorldMap build_world(const WorldSpec& spec);

private:
  std::vector<Zone> zones_;
  std::vector<std::vector<ZoneId>> neighbors_;
  std::vector<int> distance_;
};

/// Validates names and links, symmetrizes adjacency, precomputes hop
/// distances. Throws ValidationError listing every problem.
WorldMap build_world(const WorldSpec& spec);

/// Eight zones, two cities with five times the spawn weight, one teleport
/// pair between the cities.
WorldSpec default_world_spec();

}  // namespace vplague
