#include "vplague/population.hpp"

#include <algorithm>
#include <cmath>

namespace vplague {

std::size_t SocialGraph::edge_count() const {
  std::size_t n = 0;
  for (const auto& v : out_) n += v.size();
  return n;
}

bool SocialGraph::has_edge(AvatarId from, AvatarId to) const {
  const auto& v = out_.at(from.index());
  return std::binary_search(v.begin(), v.end(), to);
}

void SocialGraph::add_edge(AvatarId from, AvatarId to) {
  if (from == to) throw std::invalid_argument("social graph: self-edge");
  if (from.index() >= out_.size() || to.index() >= out_.size())
    throw std::out_of_range("social graph: endpoint out of range");
  auto& v = out_[from.index()];
  auto it = std::lower_bound(v.begin(), v.end(), to);
  if (it == v.end() || *it != to) v.insert(it, to);
}

std::vector<std::string> validate_population_spec(const PopulationSpec& spec) {
  std::vector<std::string> problems;
  auto unit = [](double x) { return x >= 0.0 && x <= 1.0; };
  if (spec.count < 0) problems.push_back("population: count must be >= 0");
  if (spec.vocations.empty()) problems.push_back("population: at least one vocation is required");
  double weight_sum = 0.0;
  for (const auto& v : spec.vocations) {
    if (!(v.weight >= 0.0)) problems.push_back("population: vocation '" + v.label + "' has negative weight");
    weight_sum += std::max(0.0, v.weight);
    if (!unit(v.heal_min) || !unit(v.heal_max) || v.heal_min > v.heal_max)
      problems.push_back("population: vocation '" + v.label + "' heal range must satisfy 0 <= min <= max <= 1");
  }
  if (!spec.vocations.empty() && !(weight_sum > 0.0))
    problems.push_back("population: vocation weights must sum to a positive value");
  if (spec.level_min < 1 || spec.level_min > spec.level_max)
    problems.push_back("population: level range must be nonempty and positive");
  if (!(spec.social_degree_mean >= 0.0)) problems.push_back("population: social degree mean must be >= 0");
  if (!(spec.pets_per_avatar_mean >= 0.0)) problems.push_back("population: pets per avatar mean must be >= 0");
  const auto& b = spec.behavior;
  if (!unit(b.curiosity_mean)) problems.push_back("behavior: curiosity mean outside [0, 1]");
  if (!unit(b.risk_aversion_mean)) problems.push_back("behavior: risk aversion mean outside [0, 1]");
  if (!unit(b.trait_spread)) problems.push_back("behavior: trait spread outside [0, 1]");
  if (!unit(b.move_probability)) problems.push_back("behavior: move probability outside [0, 1]");
  return problems;
}

namespace {

std::size_t pick_weighted(const std::vector<double>& cumulative, double u) {
  const double target = u * cumulative.back();
  auto it = std::upper_bound(cumulative.begin(), cumulative.end(), target);
  return std::min<std::size_t>(static_cast<std::size_t>(it - cumulative.begin()), cumulative.size() - 1);
}

double trait(Rng& rng, double mean, double spread) {
  return std::clamp(rng.uniform(mean - spread, mean + spread), 0.0, 1.0);
}

}  // namespace

Population generate_population(const PopulationSpec& spec, const WorldMap& world, Rng& rng) {
  auto problems = validate_population_spec(spec);
  if (world.size() == 0) problems.push_back("population: world has no zones");
  if (!problems.empty()) throw ValidationError(std::move(problems));

  Population pop;
  for (const auto& v : spec.vocations) pop.vocation_labels.push_back(v.label);
  const auto n = static_cast<std::size_t>(spec.count);
  pop.avatars.reserve(n);
  pop.social = SocialGraph(n);

  std::vector<double> zone_cdf, vocation_cdf;
  double acc = 0.0;
  for (const auto& z : world.zones()) zone_cdf.push_back(acc += z.density_weight);
  acc = 0.0;
  for (const auto& v : spec.vocations) vocation_cdf.push_back(acc += std::max(0.0, v.weight));

  const auto& b = spec.behavior;
  for (std::size_t i = 0; i < n; ++i) {
    Avatar a;
    a.id = AvatarId(static_cast<std::uint32_t>(i));
    a.zone = ZoneId(static_cast<std::uint32_t>(pick_weighted(zone_cdf, rng.uniform01())));
    a.home_zone = a.zone;
    const auto voc = pick_weighted(vocation_cdf, rng.uniform01());
    a.vocation = static_cast<std::uint16_t>(voc);
    a.level = static_cast<int>(rng.uniform_int(spec.level_min, spec.level_max));
    a.heal_capability = rng.uniform(spec.vocations[voc].heal_min, spec.vocations[voc].heal_max);
    a.behavior.curiosity = trait(rng, b.curiosity_mean, b.trait_spread);
    a.behavior.risk_aversion = trait(rng, b.risk_aversion_mean, b.trait_spread);
    a.behavior.move_probability_per_tick = b.move_probability;
    const int pets = rng.poisson(spec.pets_per_avatar_mean);
    for (int k = 0; k < pets; ++k) {
      Pet p;
      p.id = PetId(static_cast<std::uint32_t>(pop.pets.size()));
      p.owner = a.id;
      a.pets.push_back(p.id);
      pop.pets.push_back(p);
    }
    pop.avatars.push_back(std::move(a));
  }

  // Directed G(n, p) by geometric skipping over the n(n-1) ordered pairs.
  if (n > 1 && spec.social_degree_mean > 0.0) {
    const double p = std::min(1.0, spec.social_degree_mean / static_cast<double>(n - 1));
    const auto pairs = static_cast<std::int64_t>(n) * static_cast<std::int64_t>(n - 1);
    std::int64_t k = -1;
    while (true) {
      const auto skip = rng.geometric(p);
      if (skip >= pairs - k - 1) break;
      k += skip + 1;
      const auto from = static_cast<std::uint32_t>(k / static_cast<std::int64_t>(n - 1));
      auto to = static_cast<std::uint32_t>(k % static_cast<std::int64_t>(n - 1));
      if (to >= from) ++to;
      pop.social.add_edge(AvatarId(from), AvatarId(to));
    }
  }
  return pop;
}

}  // namespace vplague
