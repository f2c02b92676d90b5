#include "vplague/service/session.hpp"

#include <algorithm>
#include <stdexcept>

#include "vplague/metrics.hpp"

namespace vplague::service {

using nlohmann::json;

std::string_view to_string(RunMode m) {
  switch (m) {
    case RunMode::Paused: return "paused";
    case RunMode::Stepping: return "stepping";
    case RunMode::Playing: return "playing";
  }
  return "paused";
}

Command parse_command(const json& body) {
  if (!body.is_object() || !body.contains("command") || !body["command"].is_string())
    throw std::invalid_argument("body must be an object with a string field 'command'");
  const std::string c = body["command"];
  if (c == "step") {
    const int n = body.value("n", 1);
    if (n < 1) throw std::invalid_argument("step: n must be >= 1");
    return StepCommand{n};
  }
  if (c == "play") {
    const double rate = body.value("ticks_per_second", 1.0);
    if (!(rate > 0.0)) throw std::invalid_argument("play: ticks_per_second must be positive");
    return PlayCommand{rate};
  }
  if (c == "pause") return PauseCommand{};
  if (c == "intervene") {
    if (!body.contains("intervention")) throw std::invalid_argument("intervene: missing 'intervention'");
    try {
      return InterveneCommand{intervention_from_json(body["intervention"])};
    } catch (const ScenarioError& e) {
      std::string msg;
      for (const auto& p : e.problems()) msg += (msg.empty() ? "" : "; ") + p;
      throw std::invalid_argument("intervene: " + msg);
    }
  }
  throw std::invalid_argument("unknown command '" + c + "'");
}

Session::Session(std::string id, const ScenarioConfig& config, std::optional<std::uint64_t> seed,
                 SessionOptions options)
    : id_(std::move(id)),
      scenario_name_(config.name),
      options_(options),
      sim_(config, SimOptions{seed, true, true, false}),
      world_(sim_.state().world),
      feed_builder_([this](int tick) { return snapshot_to_json(sim_.state().snapshots.at(tick), world_); }) {
  publish_new_events();
  thread_ = std::thread([this] { loop(); });
}

Session::~Session() {
  {
    std::lock_guard lock(mutex_);
    stopping_ = true;
  }
  cv_.notify_all();
  published_cv_.notify_all();
  if (thread_.joinable()) thread_.join();
}

Ack Session::control(const Command& command) {
  Ack ack;
  if (const auto* iv = std::get_if<InterveneCommand>(&command)) {
    const auto problems = validate_intervention(iv->intervention, world_);
    if (!problems.empty()) {
      for (const auto& p : problems) ack.reason += (ack.reason.empty() ? "" : "; ") + p;
      std::lock_guard lock(mutex_);
      ack.tick = tick_;
      return ack;
    }
  }
  {
    std::lock_guard lock(mutex_);
    ack.tick = tick_;
    if (commands_.size() >= options_.queue_capacity) {
      ack.reason = "command queue full";
      return ack;
    }
    commands_.push_back(command);
    ack.accepted = true;
  }
  cv_.notify_all();
  return ack;
}

int Session::tick() const {
  std::lock_guard lock(mutex_);
  return tick_;
}

RunMode Session::mode() const {
  std::lock_guard lock(mutex_);
  return mode_;
}

bool Session::finished() const {
  std::lock_guard lock(mutex_);
  return finished_;
}

std::shared_ptr<const json> Session::snapshot() const {
  std::lock_guard lock(mutex_);
  return snapshot_;
}

std::size_t Session::subscribe_cursor() const {
  std::lock_guard lock(mutex_);
  return last_snapshot_index_;
}

std::pair<std::vector<json>, std::size_t> Session::feed_since(std::size_t cursor,
                                                              std::chrono::milliseconds timeout) const {
  std::unique_lock lock(mutex_);
  published_cv_.wait_for(lock, timeout, [&] { return feed_.size() > cursor || stopping_; });
  std::vector<json> out;
  for (std::size_t i = cursor; i < feed_.size(); ++i) out.push_back(feed_[i]);
  return {std::move(out), std::max(cursor, feed_.size())};
}

bool Session::wait_for_tick(int tick, std::chrono::milliseconds timeout) const {
  std::unique_lock lock(mutex_);
  return published_cv_.wait_for(lock, timeout, [&] { return tick_ >= tick || finished_ || stopping_; }) &&
         tick_ >= tick;
}

template <class T>
T Session::ask(std::function<T(const Simulation&)> fn) {
  auto promise = std::make_shared<std::promise<T>>();
  auto future = promise->get_future();
  {
    std::lock_guard lock(mutex_);
    if (stopping_) throw std::runtime_error("session is shutting down");
    queries_.push_back([promise, fn](const Simulation& sim) {
      try {
        promise->set_value(fn(sim));
      } catch (...) {
        promise->set_exception(std::current_exception());
      }
    });
  }
  cv_.notify_all();
  return future.get();
}

json Session::avatars(const std::string& zone, std::size_t page, std::size_t page_size) {
  const auto zid = world_.find(zone);
  if (!zid) throw std::invalid_argument("unknown zone '" + zone + "'");
  if (page_size == 0) throw std::invalid_argument("page_size must be positive");
  return ask<json>([&, zid = *zid](const Simulation& sim) {
    const auto& s = sim.state();
    std::vector<const Avatar*> in_zone;
    for (const auto& a : s.pop.avatars)
      if (a.zone == zid) in_zone.push_back(&a);
    json out = {{"zone", zone}, {"tick", s.tick}, {"page", page}, {"page_size", page_size}, {"total", in_zone.size()}};
    out["avatars"] = json::array();
    for (std::size_t k = page * page_size; k < in_zone.size() && k < (page + 1) * page_size; ++k) {
      const Avatar& a = *in_zone[k];
      json j = {{"id", a.id.value},
                {"home_zone", s.world.zone(a.home_zone).name},
                {"vocation", s.pop.vocation_labels.at(a.vocation)},
                {"level", a.level},
                {"heal_capability", a.heal_capability},
                {"alive", a.alive},
                {"immune", a.immune},
                {"masked", a.masked},
                {"awareness", a.awareness.kind == AwarenessKind::Unaware      ? "unaware"
                              : a.awareness.kind == AwarenessKind::RumorAware ? "rumor"
                                                                              : "informed"}};
      j["state"] = !a.alive ? "D" : a.infection ? "I" : a.recovered ? "R" : "S";
      j["stage"] = a.infection ? json(s.variants[a.infection->variant].stages[a.infection->stage_index].name)
                               : json(nullptr);
      out["avatars"].push_back(std::move(j));
    }
    return out;
  });
}

std::vector<std::string> Session::event_log() {
  return ask<std::vector<std::string>>([](const Simulation& sim) { return sim.state().log.lines(); });
}

void Session::publish_new_events() {
  const auto& lines = sim_.state().log.lines();
  std::vector<json> messages;
  for (; published_lines_ < lines.size(); ++published_lines_) feed_builder_.consume(lines[published_lines_], messages);
  auto snap = std::make_shared<const json>(snapshot_message(sim_.tick(), snapshot_to_json(sim_.state().snapshots.back(), world_)));
  const bool done = sim_.finished();
  {
    std::lock_guard lock(mutex_);
    for (auto& m : messages) {
      if (m.at("type") == "snapshot") last_snapshot_index_ = feed_.size();
      feed_.push_back(std::move(m));
    }
    snapshot_ = std::move(snap);
    tick_ = sim_.tick();
    finished_ = done;
    if (finished_) {
      mode_ = RunMode::Paused;
      steps_pending_ = 0;
    }
  }
  published_cv_.notify_all();
}

void Session::loop() {
  using clock = std::chrono::steady_clock;
  auto next_tick_at = clock::now();
  std::unique_lock lock(mutex_);
  for (;;) {
    auto has_work = [&] {
      return stopping_ || !queries_.empty() || !commands_.empty() ||
             (mode_ == RunMode::Stepping && steps_pending_ > 0 && !finished_);
    };
    if (mode_ == RunMode::Playing && !finished_) cv_.wait_until(lock, next_tick_at, has_work);
    else cv_.wait(lock, has_work);
    if (stopping_) break;

    if (!queries_.empty()) {
      auto queries = std::move(queries_);
      queries_.clear();
      lock.unlock();
      for (auto& q : queries) q(sim_);
      lock.lock();
    }

    // Commands run in order; a step command holds the rest back until its
    // ticks are done, so interventions land at the intended boundary.
    while (!commands_.empty() && !(mode_ == RunMode::Stepping && steps_pending_ > 0)) {
      Command cmd = std::move(commands_.front());
      commands_.pop_front();
      if (auto* s = std::get_if<StepCommand>(&cmd)) {
        mode_ = RunMode::Stepping;
        steps_pending_ += s->n;
      } else if (auto* p = std::get_if<PlayCommand>(&cmd)) {
        mode_ = RunMode::Playing;
        ticks_per_second_ = p->ticks_per_second;
        next_tick_at = clock::now();
      } else if (std::get_if<PauseCommand>(&cmd)) {
        mode_ = RunMode::Paused;
        steps_pending_ = 0;
      } else if (auto* iv = std::get_if<InterveneCommand>(&cmd)) {
        try {
          sim_.submit(iv->intervention);
        } catch (const InterventionRejected&) {
          // Validated in control(); zone names never change.
        }
      }
    }

    bool step = false;
    if (!finished_) {
      if (mode_ == RunMode::Stepping && steps_pending_ > 0) {
        step = true;
        if (--steps_pending_ == 0) mode_ = RunMode::Paused;
      } else if (mode_ == RunMode::Playing && clock::now() >= next_tick_at) {
        step = true;
        next_tick_at += std::chrono::duration_cast<clock::duration>(std::chrono::duration<double>(1.0 / ticks_per_second_));
        if (next_tick_at < clock::now()) next_tick_at = clock::now();
      }
    }
    if (step) {
      lock.unlock();
      sim_.step();
      publish_new_events();
      lock.lock();
    }
  }
  // Unblock anyone still waiting on a query.
  auto queries = std::move(queries_);
  queries_.clear();
  lock.unlock();
  for (auto& q : queries) q(sim_);
}

std::shared_ptr<Session> SessionManager::create(const json& body) {
  if (!body.is_object() || !body.contains("scenario")) throw std::invalid_argument("body must name a 'scenario'");
  ScenarioConfig config;
  const auto& sc = body["scenario"];
  if (sc.is_string()) config = load_scenario(resolve_scenario_path(sc.get<std::string>()));
  else if (sc.is_object()) config = scenario_from_json(sc);
  else throw std::invalid_argument("'scenario' must be a bundled name, a path, or an inline scenario object");
  std::optional<std::uint64_t> seed;
  if (body.contains("seed") && !body["seed"].is_null()) {
    const auto& sj = body["seed"];
    if (!sj.is_number_integer() || (!sj.is_number_unsigned() && sj.get<std::int64_t>() < 0))
      throw std::invalid_argument("'seed' must be a non-negative integer");
    seed = body["seed"].get<std::uint64_t>();
  }
  std::string id;
  {
    std::lock_guard lock(mutex_);
    id = "s" + std::to_string(next_id_++);
  }
  auto session = std::make_shared<Session>(id, config, seed, options_);
  std::lock_guard lock(mutex_);
  sessions_[id] = session;
  return session;
}

std::shared_ptr<Session> SessionManager::get(const std::string& id) const {
  std::lock_guard lock(mutex_);
  auto it = sessions_.find(id);
  return it == sessions_.end() ? nullptr : it->second;
}

std::vector<std::string> SessionManager::ids() const {
  std::lock_guard lock(mutex_);
  std::vector<std::string> out;
  for (const auto& [id, _] : sessions_) out.push_back(id);
  return out;
}

}  // namespace vplague::service
