#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "vplague/behavior.hpp"
#include "vplague/intervention.hpp"
#include "vplague/metrics.hpp"
#include "vplague/scenario.hpp"

namespace vplague {

/// NDJSON event stream. Lines are serialized eagerly so two runs can be
/// compared byte for byte.
class EventLog {
public:
  explicit EventLog(bool enabled = false) : enabled_(enabled) {}
  bool enabled() const { return enabled_; }
  void emit(const nlohmann::json& event) {
    if (enabled_) lines_.push_back(event.dump());
  }
  const std::vector<std::string>& lines() const { return lines_; }
  std::string text() const;

private:
  bool enabled_;
  std::vector<std::string> lines_;
};

class InterventionRejected : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct AppliedIntervention {
  int tick = 0;
  Intervention intervention;
};

/// Everything one run owns. Copyable, so a run can be forked for what-if
/// comparisons.
struct SimState {
  WorldMap world;
  Population pop;
  VariantTable variants;
  Rng rng;
  int tick = 0;
  ChannelParams channels;
  InfoParams info;
  std::vector<Program> programs;
  std::vector<InfectionRecord> records;
  std::vector<std::uint8_t> completed;  // per case
  std::array<std::uint64_t, kChannelCount> cumulative{};
  std::uint64_t index_cases = 0;
  std::vector<TickSnapshot> snapshots;
  std::vector<AppliedIntervention> applied;
  std::vector<std::uint8_t> zone_had_case;
  EventLog log;
};

/// Applies one command at `tick`. Throws InterventionRejected (state
/// untouched) for unknown zones, bad parameters or a tick in the past.
AppliedIntervention apply_intervention(SimState& state, const Intervention& iv, int tick,
                                       std::optional<int> requested_tick = std::nullopt);

/// One tick of every ongoing CureQuest / SymptomMask / TemporaryCure program.
void run_programs(SimState& state, int tick);

TickSnapshot take_snapshot(const SimState& state);

struct SimOptions {
  std::optional<std::uint64_t> seed;
  bool events = false;
  bool use_schedule = true;
  /// Stop as soon as every index case has finished its infectious period.
  bool stop_after_index_completion = false;
};

/// The deterministic tick loop. Phase order within a tick:
///   interventions -> activity draws -> information -> movement ->
///   contacts -> exposures -> progression/mutation -> snapshot
class Simulation {
public:
  explicit Simulation(const ScenarioConfig& config, SimOptions options = {});

  const SimState& state() const { return state_; }
  SimState& mutable_state() { return state_; }
  const ScenarioConfig& config() const { return config_; }
  int tick() const { return state_.tick; }

  bool finished() const;
  /// Runs one tick. Returns false if already finished.
  bool step();
  void run_to_end();

  /// Validated now, applied at the next tick boundary.
  void submit(const Intervention& iv);
  std::size_t pending() const { return live_queue_.size(); }

  /// The activity draws of the most recent tick.
  const ActivityFrame& last_activity() const { return activity_; }

  TransmissionTree tree() const { return TransmissionTree(state_.records, state_.completed); }

private:
  void seed_index_cases();
  void record_infection(InfectionRecord rec);
  void phase_interventions();
  void phase_information(std::optional<ZoneId> epicenter);
  void phase_movement(std::optional<ZoneId> epicenter);
  void phase_exposure();
  void phase_progression();
  void finish_tick();
  bool extinct() const;

  ScenarioConfig config_;
  SimOptions options_;
  SimState state_;
  ActivityFrame activity_;
  std::deque<Intervention> live_queue_;
  std::size_t next_scheduled_ = 0;
  std::vector<ScheduledIntervention> schedule_;
};

}  // namespace vplague
