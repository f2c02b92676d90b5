#include "vplague/transmission.hpp"

#include <algorithm>

#include "vplague/kernels/exposure_kernels.hpp"

namespace vplague {

std::vector<std::string> validate_channel_params(const ChannelParams& p) {
  std::vector<std::string> problems;
  auto unit = [&](double x, const char* what) {
    if (!(x >= 0.0 && x <= 1.0)) problems.push_back(std::string("channels: ") + what + " outside [0, 1]");
  };
  unit(p.zone_chat_participation, "zone chat participation");
  unit(p.global_chat_participation, "global chat participation");
  unit(p.message_send_probability, "message send probability");
  unit(p.pet_dismiss_probability, "pet dismiss probability");
  unit(p.pet_resummon_probability, "pet resummon probability");
  if (p.pet_shedding_ticks < 0) problems.push_back("channels: pet shedding ticks must be >= 0");
  return problems;
}

bool is_infectious(const Avatar& a, const VariantTable& variants) {
  if (!a.alive) return false;
  if (a.infection) {
    const auto& def = variants[a.infection->variant];
    return def.stages[a.infection->stage_index].infectiousness_multiplier > 0.0;
  }
  return a.carrier_ticks_remaining > 0 && variants[a.carrier_variant].carrier_infectiousness_multiplier > 0.0;
}

double source_infectiousness(const Avatar& a, const VariantTable& variants, ChannelKind channel) {
  if (!a.alive) return 0.0;
  if (a.infection) return effective_infectiousness(*a.infection, variants[a.infection->variant], channel);
  if (a.carrier_ticks_remaining > 0) {
    const auto& def = variants[a.carrier_variant];
    return std::clamp(def.beta(channel) * def.carrier_infectiousness_multiplier, 0.0, 1.0);
  }
  return 0.0;
}

bool is_withdrawing(const Avatar& a, const VariantTable& variants) {
  if (!a.alive || !a.infection) return false;
  const auto& stage = variants[a.infection->variant].stages[a.infection->stage_index];
  if (stage.withdrawal_probability_per_tick <= 0.0) return false;
  return stage.withdrawal_window_ticks == 0 || a.infection->ticks_in_stage < stage.withdrawal_window_ticks;
}

ActivityFrame draw_activity(const Population& pop, const VariantTable& variants, const ChannelParams& params,
                            Rng& rng) {
  ActivityFrame f;
  const std::size_t n = pop.size();
  f.withdrawn.assign(n, 0);
  f.zone_chat.assign(n, 0);
  f.global_chat.assign(n, 0);
  for (const auto& a : pop.avatars) {
    if (!a.alive) continue;
    const std::size_t i = a.id.index();
    if (is_withdrawing(a, variants)) {
      const auto& stage = variants[a.infection->variant].stages[a.infection->stage_index];
      f.withdrawn[i] = rng.bernoulli(stage.withdrawal_probability_per_tick);
    }
    if (f.withdrawn[i]) continue;
    f.zone_chat[i] = rng.bernoulli(params.zone_chat_participation);
    f.global_chat[i] = rng.bernoulli(params.global_chat_participation);
  }
  for (const auto& a : pop.avatars) {
    if (!a.alive) continue;
    if (!is_infectious(a, variants) && !a.awareness.aware()) continue;
    for (AvatarId to : pop.social.out(a.id)) {
      if (!pop.avatar(to).alive) continue;
      if (rng.bernoulli(params.message_send_probability)) f.messages.emplace_back(a.id, to);
    }
  }
  std::sort(f.messages.begin(), f.messages.end(),
            [](const auto& x, const auto& y) { return std::tie(x.second, x.first) < std::tie(y.second, y.first); });
  return f;
}

namespace {

bool spatial_contact_allowed(const WorldMap& world, const Avatar& source, const Avatar& target) {
  if (source.zone != target.zone) return false;
  if (!world.restricted(target.zone)) return true;
  return source.home_zone == target.zone && target.home_zone == target.zone;
}

struct BlockView {
  ChannelKind channel;
  std::span<const ContactSource> sources;
  std::span<const double> prefix;
};

std::vector<double> prefix_sums(std::span<const double> w) {
  std::vector<double> out(w.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) out[i] = (acc += w[i]);
  return out;
}

/// Credits one contact with probability proportional to its infectiousness.
std::pair<ChannelKind, ContactSource> pick_contributor(std::span<const BlockView> blocks, double u) {
  double total = 0.0;
  for (const auto& b : blocks)
    if (!b.prefix.empty()) total += b.prefix.back();
  double x = u * total;
  const BlockView* last = nullptr;
  for (const auto& b : blocks) {
    if (b.prefix.empty() || b.prefix.back() <= 0.0) continue;
    last = &b;
    if (x < b.prefix.back()) {
      auto it = std::upper_bound(b.prefix.begin(), b.prefix.end(), x);
      auto idx = std::min<std::size_t>(static_cast<std::size_t>(it - b.prefix.begin()), b.prefix.size() - 1);
      return {b.channel, b.sources[idx]};
    }
    x -= b.prefix.back();
  }
  // Rounding spill past the end: credit the last positive contact.
  std::size_t idx = last->prefix.size() - 1;
  while (idx > 0 && last->prefix[idx] == last->prefix[idx - 1]) --idx;
  return {last->channel, last->sources[idx]};
}

InfectionRecord infect(Population& pop, const VariantTable& variants, AvatarId target, ChannelKind channel,
                       ContactSource source, Rng& rng, int tick) {
  InfectionRecord rec;
  rec.infectee = target;
  rec.infector = source;
  rec.channel = channel;
  rec.tick = tick;
  int parent_generation = 0;
  std::uint32_t variant = 0;
  if (source.kind == ContactSource::Kind::Pet) {
    const Pet& pet = pop.pets[source.id];
    rec.parent = pet.carried_from;
    rec.parent_case = pet.carried_infection->case_id;
    parent_generation = pet.carried_infection->generation;
    variant = pet.carried_infection->variant;
  } else {
    const Avatar& src = pop.avatars[source.id];
    rec.parent = src.id;
    if (src.infection) {
      parent_generation = src.infection->generation;
      variant = src.infection->variant;
      rec.parent_case = src.infection->case_id;
    } else {
      parent_generation = src.carrier_generation;
      variant = src.carrier_variant;
      rec.parent_case = src.carrier_case;
    }
  }
  rec.generation = parent_generation + 1;
  rec.variant = variant;
  Avatar& a = pop.avatars[target.index()];
  rec.zone = a.zone;
  a.infection = start_infection(variants[variant], rng, tick, rec.generation, rec.parent, channel, variant);
  a.recovered = false;
  return rec;
}

}  // namespace

std::vector<ContactEvent> enumerate_contacts(const WorldMap& world, const Population& pop,
                                             const VariantTable& variants, const ActivityFrame& activity, int tick) {
  std::vector<AvatarId> sources;
  for (const auto& a : pop.avatars)
    if (is_infectious(a, variants)) sources.push_back(a.id);

  std::vector<ContactEvent> out;
  for (const auto& t : pop.avatars) {
    if (!t.susceptible()) continue;
    const std::size_t ti = t.id.index();
    for (AvatarId s : sources) {
      const Avatar& src = pop.avatar(s);
      if (activity.withdrawn[s.index()]) continue;
      if (spatial_contact_allowed(world, src, t)) out.push_back({ContactSource::avatar(s), t.id, ChannelKind::Proximity, tick});
    }
    if (activity.zone_chat[ti]) {
      for (AvatarId s : sources) {
        if (!activity.zone_chat[s.index()]) continue;
        if (spatial_contact_allowed(world, pop.avatar(s), t))
          out.push_back({ContactSource::avatar(s), t.id, ChannelKind::ZoneChat, tick});
      }
    }
    if (activity.global_chat[ti]) {
      for (AvatarId s : sources)
        if (activity.global_chat[s.index()]) out.push_back({ContactSource::avatar(s), t.id, ChannelKind::GlobalChat, tick});
    }
    auto range = std::equal_range(activity.messages.begin(), activity.messages.end(), std::make_pair(AvatarId{}, t.id),
                                  [](const auto& x, const auto& y) { return x.second < y.second; });
    for (auto it = range.first; it != range.second; ++it)
      if (is_infectious(pop.avatar(it->first), variants))
        out.push_back({ContactSource::avatar(it->first), t.id, ChannelKind::DirectMessage, tick});
    for (const auto& pet : pop.pets) {
      if (!pet.shedding()) continue;
      const Avatar& owner = pop.avatar(pet.owner);
      if (owner.alive && owner.zone == t.zone)
        out.push_back({ContactSource::pet(pet.id), t.id, ChannelKind::PetVector, tick});
    }
  }
  return out;
}

double contact_infectiousness(const ContactEvent& c, const Population& pop, const VariantTable& variants) {
  if (c.source.kind == ContactSource::Kind::Pet) {
    const Pet& pet = pop.pets.at(c.source.id);
    if (!pet.carried_infection) return 0.0;
    return effective_infectiousness(*pet.carried_infection, variants[pet.carried_infection->variant], c.channel);
  }
  return source_infectiousness(pop.avatars.at(c.source.id), variants, c.channel);
}

namespace {

struct TargetContacts {
  std::array<std::vector<ContactSource>, kChannelCount> sources;
  std::array<std::vector<double>, kChannelCount> weight;
};

TargetContacts group_by_channel(std::span<const ContactEvent> contacts, const Population& pop,
                                const VariantTable& variants) {
  TargetContacts g;
  for (const auto& c : contacts) {
    const auto ch = channel_index(c.channel);
    g.sources[ch].push_back(c.source);
    g.weight[ch].push_back(contact_infectiousness(c, pop, variants));
  }
  return g;
}

double compose(const TargetContacts& g) {
  double survival = 1.0;
  for (std::size_t ch = 0; ch < kChannelCount; ++ch)
    if (!g.weight[ch].empty()) survival *= kernels::survival_product(g.weight[ch]);
  return 1.0 - survival;
}

}  // namespace

double exposure_probability(std::span<const ContactEvent> contacts_on_target, const Population& pop,
                            const VariantTable& variants) {
  if (contacts_on_target.empty()) return 0.0;
  return compose(group_by_channel(contacts_on_target, pop, variants));
}

std::vector<InfectionRecord> resolve_exposures(std::span<const ContactEvent> contacts, Population& pop,
                                               const VariantTable& variants, Rng& rng, int tick) {
  std::vector<ContactEvent> sorted(contacts.begin(), contacts.end());
  std::stable_sort(sorted.begin(), sorted.end(), [](const ContactEvent& x, const ContactEvent& y) {
    return std::tie(x.target, x.channel, x.source) < std::tie(y.target, y.channel, y.source);
  });

  std::vector<InfectionRecord> records;
  std::size_t i = 0;
  while (i < sorted.size()) {
    std::size_t j = i;
    while (j < sorted.size() && sorted[j].target == sorted[i].target) ++j;
    const AvatarId target = sorted[i].target;
    std::span<const ContactEvent> group(sorted.data() + i, j - i);
    i = j;
    if (!pop.avatar(target).susceptible()) continue;

    const auto g = group_by_channel(group, pop, variants);
    const double p = compose(g);
    if (p <= 0.0) continue;
    if (rng.uniform01() >= p) continue;

    std::array<std::vector<double>, kChannelCount> prefix;
    std::vector<BlockView> views;
    for (std::size_t ch = 0; ch < kChannelCount; ++ch) {
      if (g.sources[ch].empty()) continue;
      prefix[ch] = prefix_sums(g.weight[ch]);
      views.push_back({kAllChannels[ch], g.sources[ch], prefix[ch]});
    }
    const auto [channel, source] = pick_contributor(views, rng.uniform01());
    records.push_back(infect(pop, variants, target, channel, source, rng, tick));
  }
  return records;
}

void ExposureField::Block::finish() {
  prefix = prefix_sums(weight);
  survival = kernels::survival_product(weight);
}

ExposureField::ExposureField(const WorldMap& world, const Population& pop, const VariantTable& variants,
                             const ActivityFrame& activity)
    : world_(world), pop_(pop), activity_(activity) {
  const std::size_t zones = world.size();
  proximity_resident_.resize(zones);
  proximity_all_.resize(zones);
  chat_resident_.resize(zones);
  chat_all_.resize(zones);
  pets_.resize(zones);
  messages_.resize(pop.size());

  // Blocks collect raw multipliers; weights are beta * multiplier, clamped,
  // computed in bulk per block.
  auto add = [&](Block& b, const Avatar& a) {
    b.sources.push_back(ContactSource::avatar(a.id));
    if (a.infection) {
      b.weight.push_back(variants[a.infection->variant].stages[a.infection->stage_index].infectiousness_multiplier);
    } else {
      b.weight.push_back(variants[a.carrier_variant].carrier_infectiousness_multiplier);
    }
  };

  for (const auto& a : pop.avatars) {
    if (!is_infectious(a, variants)) continue;
    const std::size_t i = a.id.index();
    const std::size_t z = a.zone.index();
    if (!activity.withdrawn[i]) {
      add(proximity_all_[z], a);
      if (world.restricted(a.zone) && a.home_zone == a.zone) add(proximity_resident_[z], a);
    }
    if (activity.zone_chat[i]) {
      add(chat_all_[z], a);
      if (world.restricted(a.zone) && a.home_zone == a.zone) add(chat_resident_[z], a);
    }
    if (activity.global_chat[i]) add(global_, a);
  }
  for (const auto& [sender, recipient] : activity.messages) {
    const Avatar& s = pop.avatar(sender);
    if (is_infectious(s, variants)) add(messages_[recipient.index()], s);
  }

  auto scale = [&](Block& b, ChannelKind ch) {
    if (b.sources.empty()) return;
    if (variants.size() == 1) {
      kernels::scale_clamp(b.weight, variants.front().beta(ch), b.weight);
      return;
    }
    for (std::size_t k = 0; k < b.sources.size(); ++k)
      b.weight[k] = source_infectiousness(pop.avatars[b.sources[k].id], variants, ch);
  };
  for (auto& b : proximity_all_) scale(b, ChannelKind::Proximity);
  for (auto& b : proximity_resident_) scale(b, ChannelKind::Proximity);
  for (auto& b : chat_all_) scale(b, ChannelKind::ZoneChat);
  for (auto& b : chat_resident_) scale(b, ChannelKind::ZoneChat);
  scale(global_, ChannelKind::GlobalChat);
  for (auto& b : messages_) scale(b, ChannelKind::DirectMessage);

  for (const auto& pet : pop.pets) {
    if (!pet.shedding()) continue;
    const Avatar& owner = pop.avatar(pet.owner);
    if (!owner.alive) continue;
    auto& b = pets_[owner.zone.index()];
    b.sources.push_back(ContactSource::pet(pet.id));
    b.weight.push_back(
        effective_infectiousness(*pet.carried_infection, variants[pet.carried_infection->variant], ChannelKind::PetVector));
  }

  for (auto* blocks : {&proximity_resident_, &proximity_all_, &chat_resident_, &chat_all_, &pets_, &messages_})
    for (auto& b : *blocks)
      if (!b.sources.empty()) b.finish();
  if (!global_.sources.empty()) global_.finish();

  for (const auto& t : pop.avatars) {
    if (!t.susceptible()) continue;
    const auto tb = blocks_for(t);
    for (std::size_t ch = 0; ch < kChannelCount; ++ch)
      if (tb.blocks[ch]) contact_counts_[ch] += tb.blocks[ch]->sources.size();
  }
}

ExposureField::TargetBlocks ExposureField::blocks_for(const Avatar& t) const {
  TargetBlocks tb;
  const std::size_t z = t.zone.index();
  const std::size_t i = t.id.index();
  const bool restricted = world_.restricted(t.zone);
  const bool resident = t.home_zone == t.zone;
  auto nonempty = [](const Block& b) -> const Block* { return b.sources.empty() ? nullptr : &b; };
  if (!restricted)
    tb.blocks[channel_index(ChannelKind::Proximity)] = nonempty(proximity_all_[z]);
  else if (resident)
    tb.blocks[channel_index(ChannelKind::Proximity)] = nonempty(proximity_resident_[z]);
  if (activity_.zone_chat[i]) {
    if (!restricted)
      tb.blocks[channel_index(ChannelKind::ZoneChat)] = nonempty(chat_all_[z]);
    else if (resident)
      tb.blocks[channel_index(ChannelKind::ZoneChat)] = nonempty(chat_resident_[z]);
  }
  if (activity_.global_chat[i]) tb.blocks[channel_index(ChannelKind::GlobalChat)] = nonempty(global_);
  tb.blocks[channel_index(ChannelKind::DirectMessage)] = nonempty(messages_[i]);
  tb.blocks[channel_index(ChannelKind::PetVector)] = nonempty(pets_[z]);
  return tb;
}

double ExposureField::probability(const Avatar& target) const {
  if (!target.susceptible()) return 0.0;
  const auto tb = blocks_for(target);
  double survival = 1.0;
  for (const Block* b : tb.blocks)
    if (b) survival *= b->survival;
  return 1.0 - survival;
}

std::vector<InfectionRecord> ExposureField::resolve(Population& pop, const VariantTable& variants, Rng& rng,
                                                    int tick) const {
  std::vector<InfectionRecord> records;
  for (std::size_t i = 0; i < pop.size(); ++i) {
    const Avatar& t = pop.avatars[i];
    if (!t.susceptible()) continue;
    const auto tb = blocks_for(t);
    double survival = 1.0;
    bool any = false;
    for (const Block* b : tb.blocks)
      if (b) {
        survival *= b->survival;
        any = true;
      }
    if (!any) continue;
    const double p = 1.0 - survival;
    if (p <= 0.0) continue;
    if (rng.uniform01() >= p) continue;

    std::vector<BlockView> views;
    for (std::size_t ch = 0; ch < kChannelCount; ++ch)
      if (const Block* b = tb.blocks[ch]) views.push_back({kAllChannels[ch], b->sources, b->prefix});
    const auto [channel, source] = pick_contributor(views, rng.uniform01());
    records.push_back(infect(pop, variants, t.id, channel, source, rng, tick));
  }
  return records;
}

bool pet_expose(Pet& pet, std::span<const AvatarId> colocated_sources, const Population& pop,
                const VariantTable& variants, Rng& rng) {
  if (pet.status != PetStatus::Summoned || pet.carried_infection) return false;
  std::vector<double> w;
  std::vector<AvatarId> src;
  for (AvatarId s : colocated_sources) {
    const Avatar& a = pop.avatar(s);
    if (!a.alive || !a.infection) continue;
    src.push_back(s);
    w.push_back(source_infectiousness(a, variants, ChannelKind::PetVector));
  }
  if (src.empty()) return false;
  const double p = 1.0 - kernels::survival_product(w);
  if (p <= 0.0 || rng.uniform01() >= p) return false;

  const auto prefix = prefix_sums(w);
  std::vector<ContactSource> cs;
  for (AvatarId s : src) cs.push_back(ContactSource::avatar(s));
  const BlockView view{ChannelKind::PetVector, cs, prefix};
  const auto [channel, source] = pick_contributor(std::span<const BlockView>(&view, 1), rng.uniform01());
  (void)channel;
  const Avatar& from = pop.avatars[source.id];
  pet.carried_infection = *from.infection;
  pet.carried_from = from.id;
  pet.armed = false;
  pet.shedding_remaining = 0;
  return true;
}

void pet_dismiss(Pet& pet) {
  pet.status = PetStatus::Dismissed;
  if (pet.carried_infection) pet.armed = true;
}

void pet_resummon(Pet& pet, int shedding_ticks) {
  pet.status = PetStatus::Summoned;
  if (pet.carried_infection && pet.armed) {
    pet.shedding_remaining = shedding_ticks;
    pet.armed = false;
    if (shedding_ticks == 0) pet.carried_infection.reset();
  }
}

void pet_tick(Pet& pet) {
  if (!pet.shedding()) return;
  if (--pet.shedding_remaining == 0) pet.carried_infection.reset();
}

}  // namespace vplague
