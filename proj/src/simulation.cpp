#include "vplague/simulation.hpp"

#include <algorithm>
#include <numeric>

namespace vplague {

using nlohmann::json;

std::string EventLog::text() const {
  std::string out;
  for (const auto& l : lines_) {
    out += l;
    out += '\n';
  }
  return out;
}

namespace {

std::string_view awareness_name(AwarenessKind k) {
  switch (k) {
    case AwarenessKind::Unaware: return "Unaware";
    case AwarenessKind::RumorAware: return "RumorAware";
    case AwarenessKind::Informed: return "Informed";
  }
  return "Unaware";
}

json zone_or_null(const WorldMap& world, std::optional<ZoneId> z) {
  return z ? json(world.zone(*z).name) : json(nullptr);
}

json awareness_event(const WorldMap& world, const AwarenessChange& c, int tick, const char* source) {
  return {{"type", "awareness"},
          {"tick", tick},
          {"avatar", c.avatar.value},
          {"kind", std::string(awareness_name(c.after.kind))},
          {"accuracy", c.after.accuracy},
          {"believed", zone_or_null(world, c.after.believed_epicenter)},
          {"source", source}};
}

void cure(SimState& s, Avatar& a, const Program& p, int tick) {
  const auto case_id = a.infection->case_id;
  s.completed.at(case_id) = 1;
  a.infection.reset();
  const bool quest = p.kind == InterventionKind::CureQuest;
  a.recovered = quest;
  if (quest && p.grants_immunity) {
    a.immune = true;
    a.immune_until_tick.reset();
  }
  s.log.emit({{"type", "cured"},
              {"tick", tick},
              {"avatar", a.id.value},
              {"case", case_id},
              {"program", std::string(to_string(p.kind))},
              {"immune", quest && p.grants_immunity}});
}

}  // namespace

AppliedIntervention apply_intervention(SimState& s, const Intervention& iv, int tick, std::optional<int> requested_tick) {
  auto problems = validate_intervention(iv, s.world);
  if (requested_tick && *requested_tick < tick)
    problems.push_back(std::string(to_string(iv.kind)) + ": tick " + std::to_string(*requested_tick) + " is in the past");
  if (!problems.empty()) {
    std::string msg;
    for (const auto& p : problems) msg += (msg.empty() ? "" : "; ") + p;
    throw InterventionRejected(msg);
  }

  json ev = {{"type", "intervention"}, {"tick", tick}, {"intervention", intervention_to_json(iv)}};
  s.log.emit(ev);

  switch (iv.kind) {
    case InterventionKind::Warning: {
      std::vector<ZoneId> audience;
      for (const auto& name : iv.zones) audience.push_back(*s.world.find(name));
      for (auto& a : s.pop.avatars) {
        if (!a.alive || a.awareness.kind == AwarenessKind::Informed) continue;
        if (!iv.global && std::find(audience.begin(), audience.end(), a.zone) == audience.end()) continue;
        s.log.emit(awareness_event(s.world, inform(a, tick), tick, "warning"));
      }
      break;
    }
    case InterventionKind::AreaRestriction:
    case InterventionKind::LiftRestriction:
      for (const auto& name : iv.zones) s.world.set_restricted(*s.world.find(name), iv.kind == InterventionKind::AreaRestriction);
      break;
    case InterventionKind::CureQuest:
    case InterventionKind::SymptomMask:
    case InterventionKind::TemporaryCure:
      s.programs.push_back({iv.kind, iv.start_tick.value_or(tick), iv.uptake_probability_per_tick, iv.efficacy,
                            iv.grants_immunity, iv.requires_cure_sensitive_stage});
      break;
    case InterventionKind::Hotfix:
      for (auto& v : s.variants) v.set_beta(iv.channel, iv.new_beta);
      break;
  }
  s.applied.push_back({tick, iv});
  return s.applied.back();
}

void run_programs(SimState& s, int tick) {
  for (const auto& p : s.programs) {
    if (p.start_tick > tick) continue;
    for (auto& a : s.pop.avatars) {
      if (!a.alive || !a.infection) continue;
      if (p.kind == InterventionKind::SymptomMask) {
        if (a.masked) continue;
        if (s.rng.bernoulli(p.uptake)) {
          a.masked = true;
          s.log.emit({{"type", "masked"}, {"tick", tick}, {"avatar", a.id.value}});
        }
        continue;
      }
      if (p.requires_cure_sensitive_stage &&
          !s.variants[a.infection->variant].stages[a.infection->stage_index].cure_sensitive)
        continue;
      if (!s.rng.bernoulli(p.uptake)) continue;
      if (!s.rng.bernoulli(p.efficacy)) continue;
      cure(s, a, p, tick);
    }
  }
}

TickSnapshot take_snapshot(const SimState& s) {
  TickSnapshot snap;
  snap.tick = s.tick;
  snap.zones.resize(s.world.size());
  for (std::size_t z = 0; z < s.world.size(); ++z) snap.zones[z].restricted = s.world.zones()[z].restricted;
  for (const auto& a : s.pop.avatars) {
    auto& c = snap.zones[a.zone.index()];
    if (!a.alive) {
      ++c.dead;
      continue;
    }
    if (a.infection) ++c.infected;
    else if (a.recovered) ++c.recovered;
    else ++c.susceptible;
    if (a.immune) ++c.immune;
    if (shows_symptoms(a, s.variants)) ++c.visible;
    ++snap.awareness[static_cast<std::size_t>(a.awareness.kind)];
  }
  snap.cumulative_by_channel = s.cumulative;
  snap.index_cases = s.index_cases;
  snap.epicenter = estimate_epicenter(s.world, s.pop, s.variants);
  return snap;
}

Simulation::Simulation(const ScenarioConfig& config, SimOptions options)
    : config_(config), options_(options) {
  if (auto problems = validate_scenario(config_); !problems.empty()) throw ScenarioError(std::move(problems));
  state_.world = build_world(config_.world);
  state_.rng.reseed(options_.seed.value_or(config_.run.seed));
  state_.pop = generate_population(config_.population, state_.world, state_.rng);
  state_.variants = {config_.disease};
  state_.channels = config_.channels;
  state_.info = config_.info;
  state_.log = EventLog(options_.events);
  state_.zone_had_case.assign(state_.world.size(), 0);
  if (options_.use_schedule) {
    schedule_ = config_.schedule;
    std::stable_sort(schedule_.begin(), schedule_.end(), [](const auto& a, const auto& b) { return a.tick < b.tick; });
  }

  json init = {{"type", "init"}, {"tick", 0}, {"scenario", config_.name}};
  init["zones"] = json::array();
  for (const auto& z : state_.world.zones()) init["zones"].push_back(z.name);
  init["avatar_zones"] = json::array();
  for (const auto& a : state_.pop.avatars) init["avatar_zones"].push_back(a.zone.value);
  state_.log.emit(init);

  seed_index_cases();
  finish_tick();
}

void Simulation::seed_index_cases() {
  std::vector<AvatarId> candidates;
  std::optional<ZoneId> zone;
  if (config_.index_cases.zone) zone = state_.world.find(*config_.index_cases.zone);
  for (const auto& a : state_.pop.avatars)
    if (!zone || a.zone == *zone) candidates.push_back(a.id);
  const std::size_t n = candidates.size();
  const std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(std::max(config_.index_cases.count, 0)), n);
  for (std::size_t i = 0; i < k; ++i) {
    const auto j = static_cast<std::size_t>(state_.rng.uniform_int(static_cast<std::int64_t>(i), static_cast<std::int64_t>(n - 1)));
    std::swap(candidates[i], candidates[j]);
  }
  candidates.resize(k);
  std::sort(candidates.begin(), candidates.end());
  for (AvatarId id : candidates) {
    Avatar& a = state_.pop.avatar(id);
    a.infection = start_infection(state_.variants[0], state_.rng, 0, 0);
    InfectionRecord rec;
    rec.infectee = id;
    rec.infector = ContactSource::avatar(id);
    rec.tick = 0;
    rec.zone = a.zone;
    rec.index_case = true;
    record_infection(rec);
  }
}

void Simulation::record_infection(InfectionRecord rec) {
  auto& s = state_;
  rec.case_id = static_cast<std::uint32_t>(s.records.size());
  Avatar& a = s.pop.avatar(rec.infectee);
  a.infection->case_id = rec.case_id;
  if (rec.index_case) ++s.index_cases;
  else ++s.cumulative[channel_index(rec.channel)];
  s.zone_had_case[rec.zone.index()] = 1;
  const auto& stage = s.variants[a.infection->variant].stages[a.infection->stage_index];
  json ev = {{"type", "infection"},
             {"tick", rec.tick},
             {"avatar", rec.infectee.value},
             {"case", rec.case_id},
             {"parent", rec.parent ? json(rec.parent->value) : json(nullptr)},
             {"parent_case", rec.parent_case ? json(*rec.parent_case) : json(nullptr)},
             {"channel", rec.index_case ? json(nullptr) : json(std::string(to_string(rec.channel)))},
             {"generation", rec.generation},
             {"zone", s.world.zone(rec.zone).name},
             {"index_case", rec.index_case},
             {"visible", stage.symptoms_visible},
             {"variant", rec.variant},
             {"via_pet", rec.infector.kind == ContactSource::Kind::Pet}};
  s.log.emit(ev);
  s.records.push_back(rec);
  s.completed.push_back(0);
}

bool Simulation::extinct() const {
  for (const auto& a : state_.pop.avatars)
    if (a.alive && (a.infection || a.carrier_ticks_remaining > 0)) return false;
  for (const auto& p : state_.pop.pets)
    if (p.carried_infection) return false;
  return true;
}

bool Simulation::finished() const {
  if (state_.tick >= config_.run.horizon_ticks) return true;
  if (options_.stop_after_index_completion) {
    bool all = true;
    for (const auto& r : state_.records)
      if (r.index_case && !state_.completed[r.case_id]) all = false;
    if (all) return true;
  }
  return config_.run.stop_when_extinct && next_scheduled_ >= schedule_.size() && live_queue_.empty() && extinct();
}

void Simulation::submit(const Intervention& iv) {
  auto problems = validate_intervention(iv, state_.world);
  if (!problems.empty()) {
    std::string msg;
    for (const auto& p : problems) msg += (msg.empty() ? "" : "; ") + p;
    throw InterventionRejected(msg);
  }
  live_queue_.push_back(iv);
}

bool Simulation::step() {
  if (finished()) return false;
  ++state_.tick;
  phase_interventions();
  activity_ = draw_activity(state_.pop, state_.variants, state_.channels, state_.rng);
  const auto epicenter = estimate_epicenter(state_.world, state_.pop, state_.variants);
  phase_information(epicenter);
  phase_movement(epicenter);
  phase_exposure();
  phase_progression();
  finish_tick();
  return true;
}

void Simulation::run_to_end() {
  while (step()) {
  }
}

void Simulation::phase_interventions() {
  auto& s = state_;
  const int t = s.tick;
  for (auto& a : s.pop.avatars) {
    if (a.alive && a.immune && a.immune_until_tick && *a.immune_until_tick <= t) {
      a.immune = false;
      a.immune_until_tick.reset();
      s.log.emit({{"type", "immunity_lost"}, {"tick", t}, {"avatar", a.id.value}});
    }
  }
  auto apply = [&](const Intervention& iv, std::optional<int> requested) {
    try {
      apply_intervention(s, iv, t, requested);
    } catch (const InterventionRejected& e) {
      s.log.emit({{"type", "rejected"}, {"tick", t}, {"kind", std::string(to_string(iv.kind))}, {"reason", e.what()}});
    }
  };
  while (next_scheduled_ < schedule_.size() && schedule_[next_scheduled_].tick <= t) {
    const auto& e = schedule_[next_scheduled_++];
    apply(e.intervention, e.tick);
  }
  while (!live_queue_.empty()) {
    const Intervention iv = live_queue_.front();
    live_queue_.pop_front();
    apply(iv, std::nullopt);
  }
  run_programs(s, t);
}

void Simulation::phase_information(std::optional<ZoneId> epicenter) {
  auto& s = state_;
  const auto changes = spread_information(s.world, s.pop, s.variants, activity_, s.info, epicenter, s.rng, s.tick);
  for (const auto& c : changes) s.log.emit(awareness_event(s.world, c, s.tick, "rumor"));
}

void Simulation::phase_movement(std::optional<ZoneId> epicenter) {
  auto& s = state_;
  for (auto& a : s.pop.avatars) {
    if (!a.alive) continue;
    const auto dest = decide_move(a, s.world, epicenter, s.variants, activity_.withdrawn[a.id.index()] != 0, s.rng);
    if (!dest || *dest == a.zone) continue;
    s.log.emit({{"type", "move"}, {"tick", s.tick}, {"avatar", a.id.value}, {"from", a.zone.value}, {"to", dest->value}});
    a.zone = *dest;
  }
  for (auto& pet : s.pop.pets) {
    if (!s.pop.avatar(pet.owner).alive) continue;
    if (pet.status == PetStatus::Summoned) {
      if (s.rng.bernoulli(s.channels.pet_dismiss_probability)) {
        pet_dismiss(pet);
        s.log.emit({{"type", "pet_dismiss"}, {"tick", s.tick}, {"pet", pet.id.value}, {"owner", pet.owner.value}, {"armed", pet.armed}});
      }
    } else if (s.rng.bernoulli(s.channels.pet_resummon_probability)) {
      pet_resummon(pet, s.channels.pet_shedding_ticks);
      s.log.emit({{"type", "pet_resummon"},
                  {"tick", s.tick},
                  {"pet", pet.id.value},
                  {"owner", pet.owner.value},
                  {"shedding", pet.shedding_remaining}});
    }
  }
}

void Simulation::phase_exposure() {
  auto& s = state_;
  // Pets catch infections from avatars infected before this tick's exposures.
  std::vector<std::vector<AvatarId>> infected_by_zone(s.world.size());
  for (const auto& a : s.pop.avatars)
    if (a.alive && a.infection) infected_by_zone[a.zone.index()].push_back(a.id);

  std::vector<InfectionRecord> records;
  {
    const ExposureField field(s.world, s.pop, s.variants, activity_);
    if (s.log.enabled()) {
      json counts;
      const auto c = field.contact_counts();
      for (ChannelKind ch : kAllChannels) counts[std::string(to_string(ch))] = c[channel_index(ch)];
      s.log.emit({{"type", "contacts"}, {"tick", s.tick}, {"counts", counts}});
    }
    records = field.resolve(s.pop, s.variants, s.rng, s.tick);
  }
  for (auto& r : records) record_infection(r);

  for (auto& pet : s.pop.pets) {
    const Avatar& owner = s.pop.avatar(pet.owner);
    if (!owner.alive) continue;
    if (pet_expose(pet, infected_by_zone[owner.zone.index()], s.pop, s.variants, s.rng))
      s.log.emit({{"type", "pet_infected"}, {"tick", s.tick}, {"pet", pet.id.value}, {"from", pet.carried_from.value}});
  }
}

void Simulation::phase_progression() {
  auto& s = state_;
  const int t = s.tick;
  for (auto& a : s.pop.avatars) {
    if (!a.alive || a.infection || a.carrier_ticks_remaining <= 0) continue;
    if (--a.carrier_ticks_remaining == 0) {
      s.completed.at(a.carrier_case) = 1;
      s.log.emit({{"type", "carrier_end"}, {"tick", t}, {"avatar", a.id.value}});
    }
  }
  for (auto& a : s.pop.avatars) {
    if (!a.alive || !a.infection || a.infection->tick_of_infection >= t) continue;
    const auto& def = s.variants[a.infection->variant];
    const auto case_id = a.infection->case_id;
    const auto out = advance_infection(*a.infection, def, s.rng, a.heal_capability);
    switch (out.kind) {
      case ProgressKind::Died:
        a.alive = false;
        a.infection.reset();
        s.completed.at(case_id) = 1;
        s.log.emit({{"type", "died"}, {"tick", t}, {"avatar", a.id.value}, {"case", case_id}});
        break;
      case ProgressKind::Recovered: {
        const auto generation = a.infection->generation;
        const auto variant = a.infection->variant;
        a.infection.reset();
        a.recovered = true;
        if (def.grants_immunity_on_recovery) {
          a.immune = true;
          a.immune_until_tick.reset();
          if (def.immunity_duration_ticks) a.immune_until_tick = t + *def.immunity_duration_ticks;
        }
        if (a.immune && def.immune_can_transmit && def.carrier_ticks > 0) {
          a.carrier_ticks_remaining = def.carrier_ticks;
          a.carrier_generation = generation;
          a.carrier_variant = variant;
          a.carrier_case = case_id;
        } else {
          s.completed.at(case_id) = 1;
        }
        s.log.emit({{"type", "recovered"}, {"tick", t}, {"avatar", a.id.value}, {"case", case_id}, {"immune", a.immune}});
        break;
      }
      case ProgressKind::Continuing:
        *a.infection = out.state;
        if (out.stage_changed) {
          const auto& stage = def.stages[a.infection->stage_index];
          s.log.emit({{"type", "stage"},
                      {"tick", t},
                      {"avatar", a.id.value},
                      {"stage", stage.name},
                      {"visible", stage.symptoms_visible}});
        }
        break;
    }
  }
  for (auto& a : s.pop.avatars) {
    if (!a.alive || !a.infection) continue;
    const auto from = a.infection->variant;
    if (!s.variants[from].mutation) continue;
    DiseaseDefinition m = mutate_disease(s.variants[from], s.rng);
    if (m.mutation_count == s.variants[from].mutation_count) continue;
    s.variants.push_back(std::move(m));
    a.infection->variant = static_cast<std::uint32_t>(s.variants.size() - 1);
    s.log.emit({{"type", "mutation"},
                {"tick", t},
                {"avatar", a.id.value},
                {"from", from},
                {"to", a.infection->variant},
                {"name", s.variants.back().name}});
  }
  for (auto& pet : s.pop.pets) {
    const bool carrying = pet.carried_infection.has_value();
    pet_tick(pet);
    if (carrying && !pet.carried_infection) s.log.emit({{"type", "pet_cleared"}, {"tick", t}, {"pet", pet.id.value}});
  }
}

void Simulation::finish_tick() {
  auto& s = state_;
  s.snapshots.push_back(take_snapshot(s));
  const auto& snap = s.snapshots.back();
  s.log.emit({{"type", "tick"},
              {"tick", s.tick},
              {"epicenter", zone_or_null(s.world, snap.epicenter)},
              {"infected", snap.totals().infected}});
}

}  // namespace vplague
