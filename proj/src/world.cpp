#include "vplague/world.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

namespace vplague {

std::optional<ZoneId> WorldMap::find(std::string_view name) const {
  for (const auto& z : zones_)
    if (z.name == name) return z.id;
  return std::nullopt;
}

double WorldMap::total_density() const {
  double sum = 0.0;
  for (const auto& z : zones_) sum += z.density_weight;
  return sum;
}

WorldMap build_world(const WorldSpec& spec) {
  std::vector<std::string> problems;
  if (spec.zones.empty()) problems.push_back("world: at least one zone is required");

  std::map<std::string, std::uint32_t, std::less<>> index;
  double density_sum = 0.0;
  for (std::uint32_t i = 0; i < spec.zones.size(); ++i) {
    const auto& z = spec.zones[i];
    if (z.name.empty()) problems.push_back("world: zone #" + std::to_string(i) + " has no name");
    if (!index.emplace(z.name, i).second) problems.push_back("world: duplicate zone '" + z.name + "'");
    if (!(z.density_weight >= 0.0))
      problems.push_back("world: zone '" + z.name + "' has negative density weight");
    else
      density_sum += z.density_weight;
  }
  if (!spec.zones.empty() && !(density_sum > 0.0))
    problems.push_back("world: density weights must sum to a positive value");

  std::vector<std::set<std::uint32_t>> adj(spec.zones.size()), tele(spec.zones.size());
  auto lookup = [&](const std::string& name, const std::string& context) -> std::optional<std::uint32_t> {
    auto it = index.find(name);
    if (it == index.end()) {
      problems.push_back("world: " + context + " references unknown zone '" + name + "'");
      return std::nullopt;
    }
    return it->second;
  };

  for (std::uint32_t i = 0; i < spec.zones.size(); ++i) {
    for (const auto& other : spec.zones[i].adjacent) {
      auto j = lookup(other, "zone '" + spec.zones[i].name + "' adjacency");
      if (!j) continue;
      if (*j == i) continue;
      adj[i].insert(*j);
      adj[*j].insert(i);
    }
  }
  for (const auto& [a, b] : spec.teleports) {
    auto i = lookup(a, "teleport link");
    auto j = lookup(b, "teleport link");
    if (!i || !j || *i == *j) continue;
    tele[*i].insert(*j);
    tele[*j].insert(*i);
  }
  if (!problems.empty()) throw ValidationError(std::move(problems));

  WorldMap world;
  const std::size_t n = spec.zones.size();
  world.zones_.reserve(n);
  world.neighbors_.resize(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    Zone z;
    z.id = ZoneId(i);
    z.name = spec.zones[i].name;
    z.density_weight = spec.zones[i].density_weight;
    z.is_city = spec.zones[i].is_city;
    for (auto j : adj[i]) z.adjacent.emplace_back(j);
    for (auto j : tele[i]) z.teleport_links.emplace_back(j);
    std::set<std::uint32_t> all(adj[i]);
    all.insert(tele[i].begin(), tele[i].end());
    for (auto j : all) world.neighbors_[i].emplace_back(j);
    world.zones_.push_back(std::move(z));
  }

  world.distance_.assign(n * n, -1);
  for (std::size_t src = 0; src < n; ++src) {
    int* row = &world.distance_[src * n];
    row[src] = 0;
    std::deque<std::size_t> queue{src};
    while (!queue.empty()) {
      const std::size_t u = queue.front();
      queue.pop_front();
      for (ZoneId v : world.neighbors_[u]) {
        if (row[v.index()] >= 0) continue;
        row[v.index()] = row[u] + 1;
        queue.push_back(v.index());
      }
    }
  }
  return world;
}

WorldSpec default_world_spec() {
  WorldSpec spec;
  spec.zones = {
      {"east_city", 5.0, true, {"farmland", "foothills"}},
      {"farmland", 1.0, false, {"east_city", "crossroads"}},
      {"foothills", 1.0, false, {"east_city", "raid_ruins"}},
      {"crossroads", 1.0, false, {"farmland", "marsh", "west_city"}},
      {"marsh", 1.0, false, {"crossroads", "raid_ruins"}},
      {"raid_ruins", 1.0, false, {"foothills", "marsh"}},
      {"west_city", 5.0, true, {"crossroads", "dunes"}},
      {"dunes", 1.0, false, {"west_city"}},
  };
  spec.teleports = {{"east_city", "west_city"}};
  return spec;
}

}  // namespace vplague
