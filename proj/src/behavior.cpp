#include "vplague/behavior.hpp"

#include <algorithm>
#include <climits>
#include <cmath>

namespace vplague {

std::vector<std::string> validate_info_params(const InfoParams& p) {
  std::vector<std::string> problems;
  auto unit = [&](double x, const char* what) {
    if (!(x >= 0.0 && x <= 1.0)) problems.push_back(std::string("info: ") + what + " outside [0, 1]");
  };
  unit(p.observe_probability, "observe probability");
  unit(p.beta_info, "beta_info");
  unit(p.decay, "decay");
  return problems;
}

bool shows_symptoms(const Avatar& a, const VariantTable& variants) {
  if (!a.alive || !a.infection || a.masked) return false;
  return variants[a.infection->variant].stages[a.infection->stage_index].symptoms_visible;
}

std::optional<ZoneId> estimate_epicenter(const WorldMap& world, const Population& pop, const VariantTable& variants) {
  std::vector<int> count(world.size(), 0);
  for (const auto& a : pop.avatars)
    if (shows_symptoms(a, variants)) ++count[a.zone.index()];
  int best = 0;
  std::optional<ZoneId> out;
  for (std::size_t z = 0; z < count.size(); ++z) {
    if (count[z] > best) {
      best = count[z];
      out = ZoneId(static_cast<std::uint32_t>(z));
    }
  }
  return out;
}

AwarenessChange inform(Avatar& a, int tick) {
  AwarenessChange ch{a.id, a.awareness, {}};
  a.awareness.kind = AwarenessKind::Informed;
  a.awareness.accuracy = 1.0;
  a.awareness.acquired_tick = tick;
  a.awareness.believed_epicenter.reset();
  ch.after = a.awareness;
  return ch;
}

std::optional<ZoneId> believed_epicenter(const Avatar& a, std::optional<ZoneId> live_epicenter) {
  switch (a.awareness.kind) {
    case AwarenessKind::Unaware: return std::nullopt;
    case AwarenessKind::Informed: return live_epicenter;
    case AwarenessKind::RumorAware: return a.awareness.believed_epicenter;
  }
  return std::nullopt;
}

namespace {

struct Heard {
  int count = 0;
  double best_accuracy = 0.0;
  std::optional<ZoneId> belief;  // belief carried by the most accurate sender

  void add(double accuracy, std::optional<ZoneId> b) {
    ++count;
    if (count == 1 || accuracy > best_accuracy) {
      best_accuracy = accuracy;
      belief = b;
    }
  }
  void merge(const Heard& o) {
    if (o.count == 0) return;
    if (count == 0 || o.best_accuracy > best_accuracy) {
      best_accuracy = o.best_accuracy;
      belief = o.belief;
    }
    count += o.count;
  }
};

ZoneId random_zone(const WorldMap& world, Rng& rng) {
  return ZoneId(static_cast<std::uint32_t>(rng.uniform_int(0, static_cast<std::int64_t>(world.size()) - 1)));
}

}  // namespace

std::vector<AwarenessChange> spread_information(const WorldMap& world, Population& pop, const VariantTable& variants,
                                                const ActivityFrame& activity, const InfoParams& params,
                                                std::optional<ZoneId> epicenter, Rng& rng, int tick) {
  std::vector<AwarenessChange> changes;
  const std::size_t n = pop.size();

  // Senders are fixed before anything changes this tick.
  std::vector<AwarenessState> start(n);
  for (std::size_t i = 0; i < n; ++i) start[i] = pop.avatars[i].awareness;

  std::vector<Heard> zone_chat(world.size());
  Heard global_chat;
  std::vector<int> visible(world.size(), 0);
  bool visible_in_global = false;
  for (const auto& a : pop.avatars) {
    if (!a.alive) continue;
    const std::size_t i = a.id.index();
    if (shows_symptoms(a, variants)) {
      ++visible[a.zone.index()];
      if (activity.global_chat[i]) visible_in_global = true;
    }
    if (!start[i].aware()) continue;
    const auto belief = believed_epicenter(a, epicenter);
    if (activity.zone_chat[i]) zone_chat[a.zone.index()].add(start[i].accuracy, belief);
    if (activity.global_chat[i]) global_chat.add(start[i].accuracy, belief);
  }

  // First-hand observation of symptoms: co-present, or sharing global chat.
  std::vector<std::uint8_t> observed(n, 0);
  for (auto& a : pop.avatars) {
    if (!a.alive || a.awareness.aware()) continue;
    const std::size_t i = a.id.index();
    const bool sees = visible[a.zone.index()] > 0 || (visible_in_global && activity.global_chat[i]);
    if (!sees || !rng.bernoulli(params.observe_probability)) continue;
    AwarenessChange ch{a.id, a.awareness, {}};
    a.awareness.kind = AwarenessKind::RumorAware;
    a.awareness.accuracy = 1.0;
    a.awareness.acquired_tick = tick;
    a.awareness.believed_epicenter = visible[a.zone.index()] > 0 ? std::optional<ZoneId>(a.zone) : epicenter;
    ch.after = a.awareness;
    changes.push_back(ch);
    observed[i] = 1;
  }

  // One hop of rumor spread.
  std::size_t m = 0;
  for (auto& a : pop.avatars) {
    const std::size_t i = a.id.index();
    while (m < activity.messages.size() && activity.messages[m].second.index() < i) ++m;
    Heard heard;
    std::size_t mm = m;
    for (; mm < activity.messages.size() && activity.messages[mm].second.index() == i; ++mm) {
      const AvatarId s = activity.messages[mm].first;
      if (start[s.index()].aware()) heard.add(start[s.index()].accuracy, believed_epicenter(pop.avatar(s), epicenter));
    }
    if (!a.alive || a.awareness.aware() || observed[i]) continue;

    Heard total;
    if (activity.zone_chat[i]) {
      const bool blocked = world.restricted(a.zone) && a.home_zone != a.zone;
      if (!blocked) total.merge(zone_chat[a.zone.index()]);
    }
    if (activity.global_chat[i]) total.merge(global_chat);
    total.merge(heard);
    if (total.count == 0) continue;

    const double p = 1.0 - std::pow(1.0 - params.beta_info, total.count);
    if (!rng.bernoulli(p)) continue;
    AwarenessChange ch{a.id, a.awareness, {}};
    a.awareness.kind = AwarenessKind::RumorAware;
    a.awareness.accuracy = total.best_accuracy * params.decay;
    a.awareness.acquired_tick = tick;
    // A rumor keeps its sender's belief with probability equal to the new
    // accuracy; otherwise it points somewhere arbitrary.
    a.awareness.believed_epicenter =
        rng.bernoulli(a.awareness.accuracy) ? total.belief : std::optional<ZoneId>(random_zone(world, rng));
    ch.after = a.awareness;
    changes.push_back(ch);
  }
  return changes;
}

std::optional<ZoneId> decide_move(const Avatar& a, const WorldMap& world, std::optional<ZoneId> epicenter,
                                  const VariantTable& variants, bool withdrawn, Rng& rng) {
  if (!a.alive || withdrawn) return std::nullopt;
  double p = a.behavior.move_probability_per_tick;
  if (a.infection) p *= variants[a.infection->variant].stages[a.infection->stage_index].mobility_modifier;
  if (!rng.bernoulli(p)) return std::nullopt;

  const auto& nbrs = world.neighbors(a.zone);
  const auto target = believed_epicenter(a, epicenter);

  if (!target) {
    std::vector<ZoneId> open;
    for (ZoneId z : nbrs)
      if (!world.restricted(z)) open.push_back(z);
    if (open.empty()) return std::nullopt;
    return open[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(open.size()) - 1))];
  }

  const bool attracted = a.behavior.curiosity > a.behavior.risk_aversion;
  constexpr int kFar = INT_MAX / 4;
  auto dist = [&](ZoneId z) {
    const int d = world.hop_distance(z, *target);
    return d < 0 ? kFar : d;
  };
  std::vector<ZoneId> options(nbrs.begin(), nbrs.end());
  options.push_back(a.zone);
  std::sort(options.begin(), options.end());
  ZoneId best = options.front();
  for (ZoneId z : options) {
    const bool better = attracted ? dist(z) < dist(best) : dist(z) > dist(best);
    if (better) best = z;
  }
  if (best == a.zone) return std::nullopt;
  if (!world.restricted(best)) return best;

  // Overflow: settle just outside the restricted zone.
  std::optional<ZoneId> fallback;
  int fallback_d = kFar;
  for (ZoneId z : world.neighbors(best)) {
    if (world.restricted(z)) continue;
    const int d = world.hop_distance(a.zone, z);
    if (d < 0) continue;
    if (d < fallback_d) {
      fallback = z;
      fallback_d = d;
    }
  }
  if (!fallback || *fallback == a.zone) return std::nullopt;
  return fallback;
}

}  // namespace vplague
