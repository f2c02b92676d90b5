#include "vplague/service/feed.hpp"

#include "vplague/metrics.hpp"

namespace vplague::service {

using nlohmann::json;

json snapshot_message(int tick, json snapshot) {
  return {{"type", "snapshot"}, {"tick", tick}, {"snapshot", std::move(snapshot)}};
}

void FeedBuilder::consume(const std::string& line, std::vector<json>& out) {
  const json e = json::parse(line);
  const std::string type = e.at("type");
  const int tick = e.at("tick");
  if (type == "tick") {
    out.push_back(snapshot_message(tick, snapshot_for_(tick)));
  } else if (type == "intervention") {
    out.push_back({{"type", "intervention"}, {"tick", tick}, {"intervention", e.at("intervention")}});
  } else if (type == "rejected") {
    out.push_back({{"type", "rejected"}, {"tick", tick}, {"kind", e.at("kind")}, {"reason", e.at("reason")}});
  } else if (type == "died" || type == "mutation") {
    out.push_back({{"type", "event"}, {"tick", tick}, {"event", e}});
  } else if (type == "infection") {
    const std::string zone = e.at("zone");
    if (zones_with_cases_.insert(zone).second)
      out.push_back({{"type", "event"}, {"tick", tick}, {"event", {{"type", "first_case"}, {"tick", tick}, {"zone", zone}}}});
  }
}

std::vector<json> replay_feed(const std::vector<std::string>& lines) {
  const auto snapshots = replay_snapshots(lines);
  std::vector<std::string> zone_names;
  for (const auto& l : lines) {
    const json e = json::parse(l);
    if (e.at("type") == "init") {
      zone_names = e.at("zones").get<std::vector<std::string>>();
      break;
    }
  }
  std::size_t next = 0;
  FeedBuilder builder([&](int) { return snapshot_to_json(snapshots.at(next++), zone_names); });
  std::vector<json> out;
  for (const auto& l : lines) builder.consume(l, out);
  return out;
}

}  // namespace vplague::service
