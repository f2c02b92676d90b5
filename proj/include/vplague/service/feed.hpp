#pragma once

#include <functional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace vplague::service {

/// Turns event-log lines into stream messages: applied interventions, notable
/// events (first case per zone, deaths, mutations), and one snapshot message
/// at the end of every tick. The snapshot payload comes from `snapshot_for`.
class FeedBuilder {
public:
  using SnapshotSource = std::function<nlohmann::json(int tick)>;

  explicit FeedBuilder(SnapshotSource snapshot_for) : snapshot_for_(std::move(snapshot_for)) {}

  /// Appends the messages `line` produces to `out`.
  void consume(const std::string& line, std::vector<nlohmann::json>& out);

private:
  SnapshotSource snapshot_for_;
  std::set<std::string> zones_with_cases_;
};

nlohmann::json snapshot_message(int tick, nlohmann::json snapshot);

/// The feed a session would have streamed, rebuilt from its event log alone.
std::vector<nlohmann::json> replay_feed(const std::vector<std::string>& event_lines);

}  // namespace vplague::service
