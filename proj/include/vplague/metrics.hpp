#pragma once

#include <array>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "vplague/transmission.hpp"
#include "vplague/world.hpp"

namespace vplague {

struct ZoneCounts {
  int susceptible = 0;
  int infected = 0;
  int recovered = 0;
  int dead = 0;
  int immune = 0;  // overlaps the other classes
  int visible = 0;  // avatars showing symptoms
  bool restricted = false;

  int total() const { return susceptible + infected + recovered + dead; }
  friend bool operator==(const ZoneCounts&, const ZoneCounts&) = default;
};

struct TickSnapshot {
  int tick = 0;
  std::vector<ZoneCounts> zones;
  std::array<std::uint64_t, kChannelCount> cumulative_by_channel{};
  std::uint64_t index_cases = 0;
  std::array<int, 3> awareness{};  // unaware, rumor, informed (living avatars)
  std::optional<ZoneId> epicenter;

  ZoneCounts totals() const;
  friend bool operator==(const TickSnapshot&, const TickSnapshot&) = default;
};

nlohmann::json snapshot_to_json(const TickSnapshot& s, const WorldMap& world);
nlohmann::json snapshot_to_json(const TickSnapshot& s, const std::vector<std::string>& zone_names);

void write_snapshots_csv(std::ostream& out, const std::vector<TickSnapshot>& snapshots, const WorldMap& world);

/// All infection records of a run plus which episodes have finished their
/// infectious period (recovered, died or cured).
class TransmissionTree {
public:
  TransmissionTree() = default;
  TransmissionTree(std::vector<InfectionRecord> records, std::vector<std::uint8_t> completed);

  const std::vector<InfectionRecord>& records() const { return records_; }
  bool completed(std::size_t case_id) const { return completed_.at(case_id) != 0; }
  std::size_t size() const { return records_.size(); }

  /// Direct offspring of each case, from the parent links.
  std::vector<int> offspring_counts() const;
  const std::vector<std::uint32_t>& children(std::size_t case_id) const { return children_.at(case_id); }
  /// Case ids by generation.
  std::vector<std::vector<std::uint32_t>> by_generation() const;
  /// Parent links point backwards in time, so the tree has no cycles.
  bool acyclic() const;

private:
  std::vector<InfectionRecord> records_;
  std::vector<std::uint8_t> completed_;
  std::vector<std::vector<std::uint32_t>> children_;
};

void write_tree_ndjson(std::ostream& out, const TransmissionTree& tree);
nlohmann::json record_to_json(const InfectionRecord& r);

struct GenerationStat {
  int generation = 0;
  int cases = 0;  // completed cases of this generation
  int offspring = 0;
  std::optional<double> mean;
};

struct R0Estimate {
  std::optional<double> first_generation;
  std::optional<double> weighted_all;
  std::vector<GenerationStat> per_generation;
};

/// Mean offspring of completed cases, per generation and count-weighted over
/// all generations. Undefined (nullopt) without completed cases.
R0Estimate estimate_r0(const TransmissionTree& tree, std::optional<int> up_to_generation = std::nullopt);

struct ZoneR0Report {
  /// Zone name -> mean offspring of completed cases infected there.
  /// GlobalChat and DirectMessage infections go to "nonspatial".
  std::map<std::string, double> r0;
  /// Coefficient of variation of zone R0 / mean zone population.
  std::optional<double> dispersion;
};

inline constexpr const char* kNonspatialZone = "nonspatial";

ZoneR0Report r0_by_zone(const TransmissionTree& tree, const std::vector<TickSnapshot>& history, const WorldMap& world);

struct RunSummary {
  double attack_rate = 0.0;
  int ever_infected = 0;
  int peak_prevalence = 0;
  int peak_tick = 0;
  int deaths = 0;
  int duration = 0;  // last tick with anyone infected
  bool epidemic_occurred = false;
  std::optional<double> r0_first_generation;
  std::optional<double> r0_weighted;
};

RunSummary run_summary(const std::vector<TickSnapshot>& snapshots, const TransmissionTree& tree,
                       std::size_t population, double threshold = 0.05);

void write_summary(std::ostream& out, const RunSummary& s);

/// Rebuilds the per-tick snapshots from an NDJSON event log alone.
std::vector<TickSnapshot> replay_snapshots(const std::vector<std::string>& event_lines);

}  // namespace vplague
