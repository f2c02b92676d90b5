#include "vplague/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

namespace vplague {

using nlohmann::json;

ZoneCounts TickSnapshot::totals() const {
  ZoneCounts t;
  for (const auto& z : zones) {
    t.susceptible += z.susceptible;
    t.infected += z.infected;
    t.recovered += z.recovered;
    t.dead += z.dead;
    t.immune += z.immune;
    t.visible += z.visible;
  }
  return t;
}

json snapshot_to_json(const TickSnapshot& s, const WorldMap& world) {
  std::vector<std::string> names;
  for (const auto& z : world.zones()) names.push_back(z.name);
  return snapshot_to_json(s, names);
}

json snapshot_to_json(const TickSnapshot& s, const std::vector<std::string>& zone_names) {
  json j;
  j["tick"] = s.tick;
  j["zones"] = json::array();
  for (std::size_t z = 0; z < s.zones.size(); ++z) {
    const auto& c = s.zones[z];
    j["zones"].push_back({{"zone", zone_names.at(z)},
                          {"S", c.susceptible},
                          {"I", c.infected},
                          {"R", c.recovered},
                          {"D", c.dead},
                          {"immune", c.immune},
                          {"visible", c.visible},
                          {"restricted", c.restricted}});
  }
  const auto t = s.totals();
  j["totals"] = {{"S", t.susceptible}, {"I", t.infected}, {"R", t.recovered}, {"D", t.dead}, {"immune", t.immune}};
  for (ChannelKind c : kAllChannels) j["infections_by_channel"][std::string(to_string(c))] = s.cumulative_by_channel[channel_index(c)];
  j["index_cases"] = s.index_cases;
  j["awareness"] = {{"unaware", s.awareness[0]}, {"rumor", s.awareness[1]}, {"informed", s.awareness[2]}};
  j["epicenter"] = s.epicenter ? json(zone_names.at(s.epicenter->index())) : json(nullptr);
  return j;
}

void write_snapshots_csv(std::ostream& out, const std::vector<TickSnapshot>& snapshots, const WorldMap& world) {
  out << "tick,S,I,R,D,immune,visible,unaware,rumor,informed,epicenter";
  for (ChannelKind c : kAllChannels) out << ",cum_" << to_string(c);
  for (const auto& z : world.zones()) out << ',' << z.name << ".S," << z.name << ".I," << z.name << ".R," << z.name << ".D";
  out << '\n';
  for (const auto& s : snapshots) {
    const auto t = s.totals();
    out << s.tick << ',' << t.susceptible << ',' << t.infected << ',' << t.recovered << ',' << t.dead << ','
        << t.immune << ',' << t.visible << ',' << s.awareness[0] << ',' << s.awareness[1] << ',' << s.awareness[2]
        << ',' << (s.epicenter ? world.zone(*s.epicenter).name : std::string());
    for (auto v : s.cumulative_by_channel) out << ',' << v;
    for (const auto& z : s.zones) out << ',' << z.susceptible << ',' << z.infected << ',' << z.recovered << ',' << z.dead;
    out << '\n';
  }
}

TransmissionTree::TransmissionTree(std::vector<InfectionRecord> records, std::vector<std::uint8_t> completed)
    : records_(std::move(records)), completed_(std::move(completed)) {
  completed_.resize(records_.size(), 0);
  children_.resize(records_.size());
  for (std::size_t k = 0; k < records_.size(); ++k) {
    const auto& r = records_[k];
    if (r.parent_case && *r.parent_case < records_.size()) children_[*r.parent_case].push_back(static_cast<std::uint32_t>(k));
  }
}

std::vector<int> TransmissionTree::offspring_counts() const {
  std::vector<int> out(records_.size(), 0);
  for (const auto& r : records_)
    if (r.parent_case && *r.parent_case < records_.size()) ++out[*r.parent_case];
  return out;
}

std::vector<std::vector<std::uint32_t>> TransmissionTree::by_generation() const {
  std::vector<std::vector<std::uint32_t>> out;
  for (std::size_t k = 0; k < records_.size(); ++k) {
    const auto g = static_cast<std::size_t>(std::max(0, records_[k].generation));
    if (out.size() <= g) out.resize(g + 1);
    out[g].push_back(static_cast<std::uint32_t>(k));
  }
  return out;
}

bool TransmissionTree::acyclic() const {
  for (std::size_t k = 0; k < records_.size(); ++k) {
    const auto& r = records_[k];
    if (r.index_case != !r.parent_case.has_value()) return false;
    if (r.parent_case && *r.parent_case >= k) return false;
  }
  return true;
}

json record_to_json(const InfectionRecord& r) {
  json j;
  j["case"] = r.case_id;
  j["infectee"] = r.infectee.value;
  j["tick"] = r.tick;
  j["generation"] = r.generation;
  j["channel"] = r.index_case ? json(nullptr) : json(std::string(to_string(r.channel)));
  j["zone"] = r.zone.value;
  j["variant"] = r.variant;
  j["index_case"] = r.index_case;
  if (r.index_case) {
    j["infector"] = nullptr;
  } else {
    j["infector"] = {{"kind", r.infector.kind == ContactSource::Kind::Pet ? "pet" : "avatar"}, {"id", r.infector.id}};
  }
  j["parent"] = r.parent ? json(r.parent->value) : json(nullptr);
  j["parent_case"] = r.parent_case ? json(*r.parent_case) : json(nullptr);
  return j;
}

void write_tree_ndjson(std::ostream& out, const TransmissionTree& tree) {
  for (std::size_t k = 0; k < tree.size(); ++k) {
    json j = record_to_json(tree.records()[k]);
    j["completed"] = tree.completed(k);
    out << j.dump() << '\n';
  }
}

R0Estimate estimate_r0(const TransmissionTree& tree, std::optional<int> up_to_generation) {
  R0Estimate est;
  const auto offspring = tree.offspring_counts();
  std::vector<GenerationStat> gens;
  for (std::size_t k = 0; k < tree.size(); ++k) {
    if (!tree.completed(k)) continue;
    const int g = tree.records()[k].generation;
    if (up_to_generation && g > *up_to_generation) continue;
    if (static_cast<int>(gens.size()) <= g) {
      const auto old = gens.size();
      gens.resize(static_cast<std::size_t>(g) + 1);
      for (auto i = old; i < gens.size(); ++i) gens[i].generation = static_cast<int>(i);
    }
    ++gens[static_cast<std::size_t>(g)].cases;
    gens[static_cast<std::size_t>(g)].offspring += offspring[k];
  }
  long total_cases = 0;
  long total_offspring = 0;
  for (auto& g : gens) {
    if (g.cases > 0) g.mean = static_cast<double>(g.offspring) / g.cases;
    total_cases += g.cases;
    total_offspring += g.offspring;
  }
  if (!gens.empty()) est.first_generation = gens.front().mean;
  if (total_cases > 0) est.weighted_all = static_cast<double>(total_offspring) / static_cast<double>(total_cases);
  est.per_generation = std::move(gens);
  return est;
}

ZoneR0Report r0_by_zone(const TransmissionTree& tree, const std::vector<TickSnapshot>& history, const WorldMap& world) {
  ZoneR0Report rep;
  const auto offspring = tree.offspring_counts();
  std::map<std::string, std::pair<long, long>> acc;  // cases, offspring
  std::map<std::string, std::size_t> zone_index;
  for (std::size_t k = 0; k < tree.size(); ++k) {
    if (!tree.completed(k)) continue;
    const auto& r = tree.records()[k];
    const bool nonspatial =
        !r.index_case && (r.channel == ChannelKind::GlobalChat || r.channel == ChannelKind::DirectMessage);
    const std::string key = nonspatial ? kNonspatialZone : world.zone(r.zone).name;
    if (!nonspatial) zone_index[key] = r.zone.index();
    auto& a = acc[key];
    ++a.first;
    a.second += offspring[k];
  }
  for (const auto& [zone, a] : acc) rep.r0[zone] = static_cast<double>(a.second) / static_cast<double>(a.first);

  std::vector<double> ratios;
  for (const auto& [zone, z] : zone_index) {
    double pop = 0.0;
    for (const auto& s : history) pop += s.zones[z].total() - s.zones[z].dead;
    if (history.empty()) continue;
    pop /= static_cast<double>(history.size());
    if (pop > 0.0) ratios.push_back(rep.r0[zone] / pop);
  }
  if (!ratios.empty()) {
    double mean = 0.0;
    for (double x : ratios) mean += x;
    mean /= static_cast<double>(ratios.size());
    double var = 0.0;
    for (double x : ratios) var += (x - mean) * (x - mean);
    var /= static_cast<double>(ratios.size());
    if (mean > 0.0) rep.dispersion = std::sqrt(var) / mean;
  }
  return rep;
}

RunSummary run_summary(const std::vector<TickSnapshot>& snapshots, const TransmissionTree& tree,
                       std::size_t population, double threshold) {
  RunSummary s;
  std::vector<std::uint8_t> seen(population, 0);
  for (const auto& r : tree.records())
    if (r.infectee.index() < population && !seen[r.infectee.index()]) {
      seen[r.infectee.index()] = 1;
      ++s.ever_infected;
    }
  s.attack_rate = population ? static_cast<double>(s.ever_infected) / static_cast<double>(population) : 0.0;
  for (const auto& snap : snapshots) {
    const auto t = snap.totals();
    if (t.infected > s.peak_prevalence) {
      s.peak_prevalence = t.infected;
      s.peak_tick = snap.tick;
    }
    if (t.infected > 0) s.duration = snap.tick;
  }
  if (!snapshots.empty()) s.deaths = snapshots.back().totals().dead;
  s.epidemic_occurred = s.attack_rate >= threshold;
  const auto r0 = estimate_r0(tree);
  s.r0_first_generation = r0.first_generation;
  s.r0_weighted = r0.weighted_all;
  return s;
}

void write_summary(std::ostream& out, const RunSummary& s) {
  auto opt = [](const std::optional<double>& v) { return v ? std::to_string(*v) : std::string("undefined"); };
  out << "attack_rate: " << s.attack_rate << '\n'
      << "ever_infected: " << s.ever_infected << '\n'
      << "peak_prevalence: " << s.peak_prevalence << '\n'
      << "peak_tick: " << s.peak_tick << '\n'
      << "deaths: " << s.deaths << '\n'
      << "duration: " << s.duration << '\n'
      << "epidemic_occurred: " << (s.epidemic_occurred ? "true" : "false") << '\n'
      << "r0_first_generation: " << opt(s.r0_first_generation) << '\n'
      << "r0_weighted: " << opt(s.r0_weighted) << '\n';
}

namespace {

struct ReplayAvatar {
  std::uint32_t zone = 0;
  bool alive = true;
  bool infected = false;
  bool recovered = false;
  bool immune = false;
  bool visible = false;
  bool masked = false;
  int awareness = 0;
};

}  // namespace

std::vector<TickSnapshot> replay_snapshots(const std::vector<std::string>& lines) {
  std::vector<TickSnapshot> out;
  std::vector<ReplayAvatar> avatars;
  std::vector<std::string> zone_names;
  std::vector<bool> restricted;
  std::array<std::uint64_t, kChannelCount> cumulative{};
  std::uint64_t index_cases = 0;

  auto zone_of = [&](const std::string& name) -> std::optional<std::size_t> {
    for (std::size_t z = 0; z < zone_names.size(); ++z)
      if (zone_names[z] == name) return z;
    return std::nullopt;
  };

  for (const auto& line : lines) {
    const json e = json::parse(line);
    const std::string type = e.at("type");
    if (type == "init") {
      zone_names = e.at("zones").get<std::vector<std::string>>();
      restricted.assign(zone_names.size(), false);
      avatars.clear();
      for (auto z : e.at("avatar_zones")) avatars.push_back({z.get<std::uint32_t>()});
      continue;
    }
    if (type == "tick") {
      TickSnapshot s;
      s.tick = e.at("tick");
      s.zones.resize(zone_names.size());
      for (std::size_t z = 0; z < zone_names.size(); ++z) s.zones[z].restricted = restricted[z];
      for (const auto& a : avatars) {
        auto& c = s.zones[a.zone];
        if (!a.alive) {
          ++c.dead;
          continue;
        }
        if (a.infected) ++c.infected;
        else if (a.recovered) ++c.recovered;
        else ++c.susceptible;
        if (a.immune) ++c.immune;
        if (a.infected && a.visible && !a.masked) ++c.visible;
        ++s.awareness[static_cast<std::size_t>(a.awareness)];
      }
      s.cumulative_by_channel = cumulative;
      s.index_cases = index_cases;
      if (!e.at("epicenter").is_null()) {
        if (auto z = zone_of(e.at("epicenter").get<std::string>())) s.epicenter = ZoneId(static_cast<std::uint32_t>(*z));
      }
      out.push_back(std::move(s));
      continue;
    }
    if (type == "intervention") {
      const auto& iv = e.at("intervention");
      const std::string kind = iv.at("kind");
      if (kind == "AreaRestriction" || kind == "LiftRestriction")
        for (const auto& name : iv.at("zones"))
          if (auto z = zone_of(name.get<std::string>())) restricted[*z] = kind == "AreaRestriction";
      continue;
    }
    if (!e.contains("avatar")) continue;
    auto& a = avatars.at(e.at("avatar").get<std::size_t>());
    if (type == "infection") {
      a.infected = true;
      a.recovered = false;
      a.visible = e.at("visible");
      if (e.at("index_case").get<bool>()) ++index_cases;
      else ++cumulative[channel_index(*parse_channel(e.at("channel").get<std::string>()))];
    } else if (type == "stage") {
      a.visible = e.at("visible");
    } else if (type == "masked") {
      a.masked = true;
    } else if (type == "recovered") {
      a.infected = false;
      a.recovered = true;
      a.immune = e.at("immune");
    } else if (type == "died") {
      a.alive = false;
      a.infected = false;
    } else if (type == "cured") {
      a.infected = false;
      a.recovered = e.at("program") == "CureQuest";
      if (e.at("immune").get<bool>()) a.immune = true;
    } else if (type == "immunity_lost") {
      a.immune = false;
    } else if (type == "move") {
      a.zone = e.at("to");
    } else if (type == "awareness") {
      const std::string kind = e.at("kind");
      a.awareness = kind == "Unaware" ? 0 : (kind == "RumorAware" ? 1 : 2);
    }
  }
  return out;
}

}  // namespace vplague
