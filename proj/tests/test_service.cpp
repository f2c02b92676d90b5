#include <doctest.h>

#include <httplib.h>

#include <thread>

#include "support.hpp"
#include "vplague/runner.hpp"
#include "vplague/service/server.hpp"
#include "vplague/service/session.hpp"

using namespace vplague;
using namespace vplague::service;
using nlohmann::json;
using namespace std::chrono_literals;

namespace {

/// Steps a session one tick at a time, submitting each schedule entry just
/// before the tick it belongs to.
void drive(Session& s, const std::vector<ScheduledIntervention>& schedule) {
  while (!s.finished()) {
    const int t = s.tick();
    for (const auto& e : schedule)
      if (e.tick == t + 1) REQUIRE(s.control(InterveneCommand{e.intervention}).accepted);
    REQUIRE(s.control(StepCommand{1}).accepted);
    REQUIRE(s.wait_for_tick(t + 1, 10s));
  }
}

ScenarioConfig endless(int horizon) {
  auto c = testing::bundled("gray-plague");
  c.schedule.clear();
  c.run.horizon_ticks = horizon;
  c.run.stop_when_extinct = false;
  c.population.count = 300;
  return c;
}

}  // namespace

TEST_CASE("command parsing") {
  CHECK(std::get<StepCommand>(parse_command({{"command", "step"}, {"n", 4}})).n == 4);
  CHECK(std::get<StepCommand>(parse_command({{"command", "step"}})).n == 1);
  CHECK(std::get<PlayCommand>(parse_command({{"command", "play"}, {"ticks_per_second", 5}})).ticks_per_second == 5);
  CHECK(std::holds_alternative<PauseCommand>(parse_command({{"command", "pause"}})));
  const auto iv = parse_command(json::parse(R"({"command": "intervene", "intervention": {"kind": "Warning", "audience": "global"}})"));
  CHECK(std::get<InterveneCommand>(iv).intervention.global);
  CHECK_THROWS_AS(parse_command({{"command", "step"}, {"n", 0}}), std::invalid_argument);
  CHECK_THROWS_AS(parse_command({{"command", "play"}, {"ticks_per_second", -1}}), std::invalid_argument);
  CHECK_THROWS_AS(parse_command({{"command", "rewind"}}), std::invalid_argument);
  CHECK_THROWS_AS(parse_command(json::array()), std::invalid_argument);
  CHECK_THROWS_WITH_AS(parse_command(json::parse(R"({"command": "intervene", "intervention": {"kind": "Nope"}})")),
                       doctest::Contains("Nope"), std::invalid_argument);
}

TEST_CASE("stepping") {
  Session s("t", endless(50), 3);
  CHECK(s.tick() == 0);
  CHECK(s.mode() == RunMode::Paused);
  REQUIRE(s.snapshot());
  CHECK(s.snapshot()->at("tick") == 0);
  REQUIRE(s.control(StepCommand{3}).accepted);
  REQUIRE(s.wait_for_tick(3, 10s));
  std::this_thread::sleep_for(20ms);
  CHECK(s.tick() == 3);
  CHECK(s.mode() == RunMode::Paused);
  CHECK(s.snapshot()->at("tick") == 3);
  CHECK_FALSE(s.wait_for_tick(4, 30ms));
}

TEST_CASE("play and pause") {
  Session s("t", endless(100000), 3);
  REQUIRE(s.control(PlayCommand{500.0}).accepted);
  REQUIRE(s.wait_for_tick(5, 10s));
  CHECK(s.mode() == RunMode::Playing);
  REQUIRE(s.control(PauseCommand{}).accepted);
  std::this_thread::sleep_for(50ms);
  const int t = s.tick();
  std::this_thread::sleep_for(100ms);
  CHECK(s.tick() == t);
  CHECK(s.mode() == RunMode::Paused);
}

TEST_CASE("a session runs to its end and stops") {
  Session s("t", endless(12), 3);
  s.control(StepCommand{100});
  REQUIRE(s.wait_for_tick(12, 10s));
  std::this_thread::sleep_for(20ms);
  CHECK(s.finished());
  CHECK(s.tick() == 12);
  CHECK(s.mode() == RunMode::Paused);
}

TEST_CASE("interventions are validated on submission") {
  Session s("t", endless(50), 3);
  Intervention r;
  r.kind = InterventionKind::AreaRestriction;
  r.zones = {"narnia"};
  const auto ack = s.control(InterveneCommand{r});
  CHECK_FALSE(ack.accepted);
  CHECK(ack.reason.find("narnia") != std::string::npos);
  r.zones = {"the_mall"};
  CHECK(s.control(InterveneCommand{r}).accepted);
  s.control(StepCommand{1});
  REQUIRE(s.wait_for_tick(1, 10s));
  bool restricted = false;
  for (const auto& z : s.snapshot()->at("snapshot").at("zones"))
    if (z.at("zone") == "the_mall") restricted = z.at("restricted");
  CHECK(restricted);
}

TEST_CASE("a full queue refuses commands") {
  SessionOptions o;
  o.queue_capacity = 2;
  Session s("t", endless(1000000), 3, o);
  REQUIRE(s.control(StepCommand{1000000}).accepted);
  REQUIRE(s.wait_for_tick(1, 10s));
  // the running step holds later commands back
  CHECK(s.control(PauseCommand{}).accepted);
  CHECK(s.control(PauseCommand{}).accepted);
  const auto ack = s.control(PauseCommand{});
  CHECK_FALSE(ack.accepted);
  CHECK(ack.reason == "command queue full");
}

TEST_CASE("headless session reproduces the scheduled run byte for byte") {
  const auto c = testing::bundled("gray-plague");
  RunOptions o;
  o.seed = 5;
  o.events = true;
  const auto batch = run_scenario(c, o);

  auto live = c;
  live.schedule.clear();
  Session s("t", live, 5);
  drive(s, c.schedule);
  auto log = s.event_log();
  CHECK(log == batch.events);
}

TEST_CASE("feed and replay") {
  auto c = testing::bundled("gray-plague");
  c.run.horizon_ticks = 60;
  c.run.stop_when_extinct = false;
  Session s("t", c, 2);
  s.control(StepCommand{60});
  REQUIRE(s.wait_for_tick(60, 20s));
  std::this_thread::sleep_for(20ms);
  auto [feed, cursor] = s.feed_since(0, 100ms);
  CHECK(cursor == feed.size());
  int snapshots = 0, interventions = 0, first_cases = 0;
  for (const auto& m : feed) {
    if (m["type"] == "snapshot") CHECK(m["tick"] == snapshots++);
    if (m["type"] == "intervention") ++interventions;
    if (m["type"] == "event" && m["event"]["type"] == "first_case") ++first_cases;
  }
  CHECK(snapshots == 61);
  CHECK(interventions == 3);
  CHECK(first_cases >= 1);
  CHECK(first_cases <= 4);
  CHECK(replay_feed(s.event_log()) == feed);
  CHECK(feed[s.subscribe_cursor()]["type"] == "snapshot");
  CHECK(feed[s.subscribe_cursor()]["tick"] == 60);
  const auto [more, next] = s.feed_since(cursor, 30ms);
  CHECK(more.empty());
  CHECK(next == cursor);
}

TEST_CASE("avatar pages") {
  Session s("t", endless(50), 3);
  const auto snap = s.snapshot();
  int in_mall = 0;
  for (const auto& z : snap->at("snapshot").at("zones"))
    if (z.at("zone") == "the_mall") in_mall = z.at("S").get<int>() + z.at("I").get<int>() + z.at("R").get<int>() + z.at("D").get<int>();
  const auto p0 = s.avatars("the_mall", 0, 10);
  CHECK(p0.at("total") == in_mall);
  CHECK(p0.at("avatars").size() == std::min(10, in_mall));
  std::size_t seen = 0;
  for (std::size_t page = 0;; ++page) {
    const auto p = s.avatars("the_mall", page, 7);
    if (p.at("avatars").empty()) break;
    seen += p.at("avatars").size();
  }
  CHECK(seen == static_cast<std::size_t>(in_mall));
  CHECK_THROWS_AS(s.avatars("narnia", 0, 10), std::invalid_argument);
  CHECK_THROWS_AS(s.avatars("the_mall", 0, 0), std::invalid_argument);
}

TEST_CASE("session manager") {
  SessionManager m;
  auto a = m.create({{"scenario", "gray-plague"}, {"seed", 4}});
  auto b = m.create({{"scenario", scenario_to_json(endless(10))}});
  CHECK(a->id() == "s1");
  CHECK(b->id() == "s2");
  CHECK(m.get("s1") == a);
  CHECK_FALSE(m.get("s9"));
  CHECK(m.ids() == std::vector<std::string>{"s1", "s2"});
  CHECK_THROWS_AS(m.create({{"seed", 1}}), std::invalid_argument);
  CHECK_THROWS_AS(m.create({{"scenario", "gray-plague"}, {"seed", -1}}), std::invalid_argument);
  CHECK_THROWS_AS(m.create({{"scenario", "no-such-scenario"}}), ScenarioError);
  auto bad = scenario_to_json(endless(10));
  bad["disease"]["beta"]["Proximity"] = 3;
  CHECK_THROWS_AS(m.create({{"scenario", bad}}), ScenarioError);
}

TEST_CASE("http") {
  SessionManager sessions;
  Server server(sessions);
  const int port = server.bind_any_port("127.0.0.1");
  REQUIRE(port > 0);
  std::thread serving([&] { server.listen_after_bind(); });
  httplib::Client cli("127.0.0.1", port);
  cli.set_read_timeout(5, 0);

  auto res = cli.Post("/sessions", R"({"scenario": "gray-plague", "seed": 3})", "application/json");
  REQUIRE(res);
  CHECK(res->status == 201);
  const auto created = json::parse(res->body);
  const std::string id = created.at("id");
  CHECK(created.at("snapshot").at("tick") == 0);

  res = cli.Post("/sessions", R"({"scenario": {"disease": {"stages": []}}})", "application/json");
  REQUIRE(res);
  CHECK(res->status == 400);
  CHECK_FALSE(json::parse(res->body).at("problems").empty());
  res = cli.Post("/sessions", "{not json", "application/json");
  CHECK(res->status == 400);

  res = cli.Post("/sessions/" + id + "/control", R"({"command": "step", "n": 2})", "application/json");
  REQUIRE(res);
  CHECK(res->status == 202);
  CHECK(json::parse(res->body).at("accepted") == true);
  REQUIRE(sessions.get(id)->wait_for_tick(2, 10s));

  res = cli.Post("/sessions/" + id + "/control", R"({"command": "intervene", "intervention": {"kind": "AreaRestriction", "zones": ["narnia"]}})", "application/json");
  CHECK(res->status == 400);
  CHECK(json::parse(res->body).at("reason").get<std::string>().find("narnia") != std::string::npos);
  res = cli.Post("/sessions/" + id + "/control", R"({"command": "fly"})", "application/json");
  CHECK(res->status == 400);
  res = cli.Post("/sessions/nobody/control", R"({"command": "pause"})", "application/json");
  CHECK(res->status == 404);

  res = cli.Get("/sessions/" + id + "/snapshot");
  REQUIRE(res);
  CHECK(res->status == 200);
  const auto snap = json::parse(res->body);
  CHECK(snap.at("tick") == 2);
  CHECK(snap.at("mode") == "paused");
  CHECK(snap.at("finished") == false);

  res = cli.Get("/sessions/" + id + "/avatars?zone=the_mall&page=0&page_size=5");
  REQUIRE(res);
  CHECK(res->status == 200);
  CHECK(json::parse(res->body).at("avatars").size() <= 5);
  CHECK(cli.Get("/sessions/" + id + "/avatars")->status == 400);
  CHECK(cli.Get("/sessions/" + id + "/avatars?zone=narnia")->status == 400);

  res = cli.Get("/sessions");
  CHECK(json::parse(res->body).at("sessions") == json::array({id}));

  // stream: the latest snapshot first, then whatever the next step produces
  std::string streamed;
  std::thread stepper([&] {
    std::this_thread::sleep_for(100ms);
    httplib::Client c2("127.0.0.1", port);
    c2.Post("/sessions/" + id + "/control", R"({"command": "step", "n": 1})", "application/json");
  });
  auto sres = cli.Get("/sessions/" + id + "/stream", [&](const char* data, std::size_t len) {
    streamed.append(data, len);
    return streamed.find("\"tick\":3") == std::string::npos;
  });
  stepper.join();
  std::vector<json> lines;
  std::size_t pos = 0;
  while (true) {
    const auto nl = streamed.find('\n', pos);
    if (nl == std::string::npos) break;
    lines.push_back(json::parse(streamed.substr(pos, nl - pos)));
    pos = nl + 1;
  }
  REQUIRE(lines.size() >= 2);
  CHECK(lines.front().at("type") == "snapshot");
  CHECK(lines.front().at("tick") == 2);
  CHECK(lines.back().at("tick") == 3);

  server.stop();
  serving.join();
  CHECK_FALSE(server.running());
}
