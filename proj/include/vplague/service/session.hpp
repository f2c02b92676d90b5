#pragma once

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <future>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "vplague/service/feed.hpp"
#include "vplague/simulation.hpp"

namespace vplague::service {

enum class RunMode : std::uint8_t { Paused, Stepping, Playing };
std::string_view to_string(RunMode m);

struct StepCommand {
  int n = 1;
};
struct PlayCommand {
  double ticks_per_second = 1.0;
};
struct PauseCommand {};
struct InterveneCommand {
  Intervention intervention;
};
using Command = std::variant<StepCommand, PlayCommand, PauseCommand, InterveneCommand>;

/// Parses a control body: {"command": "step", "n": 3}, {"command": "play",
/// "ticks_per_second": 5}, {"command": "pause"}, or {"command": "intervene",
/// "intervention": {...}}. Throws std::invalid_argument with the reason.
Command parse_command(const nlohmann::json& body);

struct Ack {
  bool accepted = false;
  std::string reason;
  int tick = 0;  // session tick when the command was accepted
};

struct SessionOptions {
  std::size_t queue_capacity = 256;
};

/// One simulation and the thread that drives it. Protocol handlers only
/// enqueue commands and read published state; the loop is the sole mutator.
class Session {
public:
  Session(std::string id, const ScenarioConfig& config, std::optional<std::uint64_t> seed,
          SessionOptions options = {});
  ~Session();
  Session(const Session&) = delete;
  Session& operator=(const Session&) = delete;

  const std::string& id() const { return id_; }
  const std::string& scenario_name() const { return scenario_name_; }

  /// Validates, then enqueues. Interventions apply at the next tick boundary.
  Ack control(const Command& command);

  int tick() const;
  RunMode mode() const;
  bool finished() const;

  /// Latest snapshot message; never blocks on the loop.
  std::shared_ptr<const nlohmann::json> snapshot() const;

  /// Feed messages from `cursor` on. Blocks up to `timeout` when none are
  /// available yet. Returns the messages and the next cursor.
  std::pair<std::vector<nlohmann::json>, std::size_t> feed_since(std::size_t cursor,
                                                                 std::chrono::milliseconds timeout) const;
  /// Cursor of the latest snapshot message: where late subscribers start.
  std::size_t subscribe_cursor() const;

  /// Blocks until the session reaches `tick` (or finishes). False on timeout.
  bool wait_for_tick(int tick, std::chrono::milliseconds timeout) const;

  /// Per-avatar detail for one zone, paged. Answered by the loop thread.
  nlohmann::json avatars(const std::string& zone, std::size_t page, std::size_t page_size);
  /// Copy of the event log so far. Answered by the loop thread.
  std::vector<std::string> event_log();

private:
  using Query = std::function<void(const Simulation&)>;
  void loop();
  void publish_new_events();
  template <class T>
  T ask(std::function<T(const Simulation&)> fn);

  std::string id_;
  std::string scenario_name_;
  SessionOptions options_;
  Simulation sim_;
  WorldMap world_;  // zone names for validation and snapshots
  std::size_t published_lines_ = 0;
  FeedBuilder feed_builder_;

  mutable std::mutex mutex_;
  mutable std::condition_variable cv_;  // commands and queries for the loop
  mutable std::condition_variable published_cv_;  // new feed messages
  std::deque<Command> commands_;
  std::deque<Query> queries_;
  bool stopping_ = false;
  RunMode mode_ = RunMode::Paused;
  int steps_pending_ = 0;
  double ticks_per_second_ = 1.0;
  int tick_ = 0;
  bool finished_ = false;
  std::shared_ptr<const nlohmann::json> snapshot_;
  std::vector<nlohmann::json> feed_;
  std::size_t last_snapshot_index_ = 0;
  std::thread thread_;
};

/// Thread-safe registry of live sessions.
class SessionManager {
public:
  explicit SessionManager(SessionOptions options = {}) : options_(options) {}

  /// Body: {"scenario": name-or-path or inline object, "seed": optional}.
  /// Throws ScenarioError / std::invalid_argument on bad input.
  std::shared_ptr<Session> create(const nlohmann::json& body);
  std::shared_ptr<Session> get(const std::string& id) const;
  std::vector<std::string> ids() const;

private:
  SessionOptions options_;
  mutable std::mutex mutex_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
  std::uint64_t next_id_ = 1;
};

}  // namespace vplague::service
