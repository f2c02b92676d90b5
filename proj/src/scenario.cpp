#include "vplague/scenario.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <type_traits>

namespace vplague {

using nlohmann::json;

namespace {

std::string join_problems(const std::vector<std::string>& problems) {
  std::string out;
  for (const auto& p : problems) {
    if (!out.empty()) out += "\n";
    out += p;
  }
  return out;
}

/// Typed field access that records problems instead of throwing, so one pass
/// reports every bad field.
class Reader {
public:
  Reader(const json& node, std::string path, std::vector<std::string>& problems)
      : node_(node), path_(std::move(path)), problems_(problems) {
    if (!node_.is_object()) problems_.push_back(path_ + ": expected an object");
  }

  bool has(const char* key) const { return node_.is_object() && node_.contains(key) && !node_[key].is_null(); }
  std::string at(const char* key) const { return path_.empty() ? key : path_ + "." + key; }
  const json& raw(const char* key) const {
    seen_.insert(key);
    return node_[key];
  }

  template <class T>
  T get(const char* key, T fallback) const {
    seen_.insert(key);
    if (!has(key)) return fallback;
    if (!integral_ok<T>(node_[key])) {
      problems_.push_back(at(key) + ": wrong type");
      return fallback;
    }
    try {
      return node_[key].template get<T>();
    } catch (const json::exception&) {
      problems_.push_back(at(key) + ": wrong type");
      return fallback;
    }
  }

  template <class T>
  std::optional<T> optional(const char* key) const {
    seen_.insert(key);
    if (!has(key)) return std::nullopt;
    if (!integral_ok<T>(node_[key])) {
      problems_.push_back(at(key) + ": wrong type");
      return std::nullopt;
    }
    try {
      return node_[key].template get<T>();
    } catch (const json::exception&) {
      problems_.push_back(at(key) + ": wrong type");
      return std::nullopt;
    }
  }

  void reject_unknown() const {
    if (!node_.is_object()) return;
    for (auto it = node_.begin(); it != node_.end(); ++it)
      if (!seen_.count(it.key())) problems_.push_back(at(it.key().c_str()) + ": unknown field");
  }

private:
  // json's get<int>() truncates 1.5 silently.
  template <class T>
  static bool integral_ok(const json& v) {
    if constexpr (std::is_integral_v<T> && !std::is_same_v<T, bool>) {
      if constexpr (std::is_unsigned_v<T>) return v.is_number_unsigned();
      return v.is_number_integer();
    }
    return true;
  }

  const json& node_;
  std::string path_;
  std::vector<std::string>& problems_;
  mutable std::set<std::string> seen_;
};

DurationKind parse_duration_kind(const std::string& s, const std::string& path, std::vector<std::string>& problems) {
  if (s == "uniform") return DurationKind::Uniform;
  if (s == "geometric") return DurationKind::Geometric;
  problems.push_back(path + ": duration must be 'uniform' or 'geometric'");
  return DurationKind::Uniform;
}

StageSpec stage_from_json(const json& j, const std::string& path, std::vector<std::string>& problems) {
  Reader r(j, path, problems);
  StageSpec s;
  s.name = r.get<std::string>("name", "");
  s.duration_kind = parse_duration_kind(r.get<std::string>("duration", "uniform"), r.at("duration"), problems);
  s.duration_min_days = r.get<int>("duration_min", 1);
  s.duration_max_days = r.get<int>("duration_max", s.duration_min_days);
  s.exit_probability_per_tick = r.get<double>("exit_probability", 1.0);
  s.infectiousness_multiplier = r.get<double>("infectiousness", 0.0);
  s.symptoms_visible = r.get<bool>("symptoms_visible", false);
  s.mobility_modifier = r.get<double>("mobility", 1.0);
  s.withdrawal_probability_per_tick = r.get<double>("withdrawal_probability", 0.0);
  s.withdrawal_window_ticks = r.get<int>("withdrawal_window", 0);
  s.mortality_hazard_per_tick = r.get<double>("mortality_hazard", 0.0);
  s.cure_sensitive = r.get<bool>("cure_sensitive", false);
  r.reject_unknown();
  return s;
}

DiseaseDefinition disease_from_json_impl(const json& j, const std::string& path, std::vector<std::string>& problems) {
  Reader r(j, path, problems);
  DiseaseDefinition d;
  d.name = r.get<std::string>("name", "disease");
  if (r.has("stages")) {
    const auto& stages = r.raw("stages");
    if (!stages.is_array()) {
      problems.push_back(r.at("stages") + ": expected an array");
    } else {
      for (std::size_t i = 0; i < stages.size(); ++i)
        d.stages.push_back(stage_from_json(stages[i], r.at("stages") + "[" + std::to_string(i) + "]", problems));
    }
  }
  if (r.has("beta")) {
    const auto& beta = r.raw("beta");
    if (!beta.is_object()) problems.push_back(r.at("beta") + ": expected an object");
    for (auto it = beta.begin(); beta.is_object() && it != beta.end(); ++it) {
      auto ch = parse_channel(it.key());
      if (!ch) {
        problems.push_back(r.at("beta") + "." + it.key() + ": unknown channel");
        continue;
      }
      if (!it.value().is_number()) {
        problems.push_back(r.at("beta") + "." + it.key() + ": expected a number");
        continue;
      }
      d.set_beta(*ch, it.value().get<double>());
    }
  }
  d.grants_immunity_on_recovery = r.get<bool>("immunity_on_recovery", true);
  d.immunity_duration_ticks = r.optional<int>("immunity_duration_ticks");
  d.immune_can_transmit = r.get<bool>("immune_can_transmit", false);
  d.carrier_ticks = r.get<int>("carrier_ticks", 0);
  d.carrier_infectiousness_multiplier = r.get<double>("carrier_infectiousness", 0.0);
  d.heal_mitigation = r.get<double>("heal_mitigation", 0.0);
  if (r.has("mutation")) {
    Reader m(r.raw("mutation"), r.at("mutation"), problems);
    MutationPolicy mp;
    mp.per_tick_probability = m.get<double>("per_tick_probability", 0.0);
    mp.beta_perturbation_fraction = m.get<double>("beta_fraction", 0.0);
    mp.severity_perturbation_fraction = m.get<double>("severity_fraction", 0.0);
    m.reject_unknown();
    d.mutation = mp;
  }
  r.reject_unknown();
  return d;
}

Intervention intervention_from_json_impl(const json& j, const std::string& path, std::vector<std::string>& problems,
                                         std::set<std::string> extra_keys = {}) {
  Reader r(j, path, problems);
  for (const auto& k : extra_keys) (void)r.get<json>(k.c_str(), json());
  Intervention iv;
  const auto kind = r.get<std::string>("kind", "");
  if (auto k = parse_intervention_kind(kind)) {
    iv.kind = *k;
  } else {
    problems.push_back(r.at("kind") + ": unknown intervention kind '" + kind + "'");
  }
  if (r.has("audience")) {
    const auto& a = r.raw("audience");
    if (a.is_string() && a.get<std::string>() == "global") {
      iv.global = true;
    } else if (a.is_array()) {
      for (const auto& z : a) {
        if (z.is_string()) iv.zones.push_back(z.get<std::string>());
        else problems.push_back(r.at("audience") + ": zone names must be strings");
      }
    } else {
      problems.push_back(r.at("audience") + ": expected \"global\" or a list of zones");
    }
  }
  if (r.has("zones")) {
    const auto zones = r.get<std::vector<std::string>>("zones", {});
    iv.zones.insert(iv.zones.end(), zones.begin(), zones.end());
  }
  iv.accuracy_hint = r.get<double>("accuracy_hint", 1.0);
  iv.start_tick = r.optional<int>("start_tick");
  iv.uptake_probability_per_tick = r.get<double>("uptake_probability_per_tick", 0.0);
  iv.efficacy = r.get<double>("efficacy", 1.0);
  iv.grants_immunity = r.get<bool>("grants_immunity", false);
  iv.requires_cure_sensitive_stage = r.get<bool>("requires_cure_sensitive_stage", false);
  if (r.has("channel")) {
    const auto ch = r.get<std::string>("channel", "");
    if (auto c = parse_channel(ch)) iv.channel = *c;
    else problems.push_back(r.at("channel") + ": unknown channel '" + ch + "'");
  }
  iv.new_beta = r.get<double>("new_beta", 0.0);
  r.reject_unknown();
  return iv;
}

ScenarioConfig scenario_from_json_impl(const json& doc, std::vector<std::string>& problems) {
  ScenarioConfig c;
  Reader top(doc, "", problems);
  c.name = top.get<std::string>("name", "unnamed");
  c.description = top.get<std::string>("description", "");

  if (top.has("world")) {
    Reader w(top.raw("world"), "world", problems);
    if (w.has("zones")) {
      const auto& zones = w.raw("zones");
      for (std::size_t i = 0; zones.is_array() && i < zones.size(); ++i) {
        Reader z(zones[i], "world.zones[" + std::to_string(i) + "]", problems);
        ZoneSpec zs;
        zs.name = z.get<std::string>("name", "");
        zs.density_weight = z.get<double>("density", 1.0);
        zs.is_city = z.get<bool>("city", false);
        zs.adjacent = z.get<std::vector<std::string>>("adjacent", {});
        z.reject_unknown();
        c.world.zones.push_back(std::move(zs));
      }
    }
    for (const auto& t : w.get<std::vector<std::vector<std::string>>>("teleports", {})) {
      if (t.size() != 2) {
        problems.push_back("world.teleports: each link needs exactly two zones");
        continue;
      }
      c.world.teleports.emplace_back(t[0], t[1]);
    }
    w.reject_unknown();
  } else {
    c.world = default_world_spec();
  }

  if (top.has("population")) {
    Reader p(top.raw("population"), "population", problems);
    c.population.count = p.get<int>("count", c.population.count);
    if (p.has("vocations")) {
      c.population.vocations.clear();
      const auto& v = p.raw("vocations");
      for (std::size_t i = 0; v.is_array() && i < v.size(); ++i) {
        Reader vr(v[i], "population.vocations[" + std::to_string(i) + "]", problems);
        VocationSpec vs;
        vs.label = vr.get<std::string>("label", "");
        vs.weight = vr.get<double>("weight", 1.0);
        vs.heal_min = vr.get<double>("heal_min", 0.0);
        vs.heal_max = vr.get<double>("heal_max", 1.0);
        vr.reject_unknown();
        c.population.vocations.push_back(vs);
      }
    }
    c.population.level_min = p.get<int>("level_min", c.population.level_min);
    c.population.level_max = p.get<int>("level_max", c.population.level_max);
    c.population.social_degree_mean = p.get<double>("social_degree_mean", c.population.social_degree_mean);
    c.population.pets_per_avatar_mean = p.get<double>("pets_per_avatar_mean", c.population.pets_per_avatar_mean);
    p.reject_unknown();
  }

  if (top.has("behavior")) {
    Reader b(top.raw("behavior"), "behavior", problems);
    auto& bs = c.population.behavior;
    bs.curiosity_mean = b.get<double>("curiosity_mean", bs.curiosity_mean);
    bs.risk_aversion_mean = b.get<double>("risk_aversion_mean", bs.risk_aversion_mean);
    bs.trait_spread = b.get<double>("trait_spread", bs.trait_spread);
    bs.move_probability = b.get<double>("move_probability", bs.move_probability);
    b.reject_unknown();
  }

  if (top.has("disease")) c.disease = disease_from_json_impl(top.raw("disease"), "disease", problems);
  else c.disease = smallpox_default();

  if (top.has("channels")) {
    Reader ch(top.raw("channels"), "channels", problems);
    auto& cp = c.channels;
    cp.zone_chat_participation = ch.get<double>("zone_chat_participation", cp.zone_chat_participation);
    cp.global_chat_participation = ch.get<double>("global_chat_participation", cp.global_chat_participation);
    cp.message_send_probability = ch.get<double>("message_send_probability", cp.message_send_probability);
    cp.pet_shedding_ticks = ch.get<int>("pet_shedding_ticks", cp.pet_shedding_ticks);
    cp.pet_dismiss_probability = ch.get<double>("pet_dismiss_probability", cp.pet_dismiss_probability);
    cp.pet_resummon_probability = ch.get<double>("pet_resummon_probability", cp.pet_resummon_probability);
    ch.reject_unknown();
  }

  if (top.has("info")) {
    Reader in(top.raw("info"), "info", problems);
    c.info.observe_probability = in.get<double>("observe_probability", c.info.observe_probability);
    c.info.beta_info = in.get<double>("beta_info", c.info.beta_info);
    c.info.decay = in.get<double>("decay", c.info.decay);
    in.reject_unknown();
  }

  if (top.has("index_cases")) {
    Reader ic(top.raw("index_cases"), "index_cases", problems);
    c.index_cases.count = ic.get<int>("count", c.index_cases.count);
    const auto placement = ic.get<std::string>("placement", "random");
    if (placement != "random") c.index_cases.zone = placement;
    ic.reject_unknown();
  }

  if (top.has("schedule")) {
    const auto& sched = top.raw("schedule");
    if (!sched.is_array()) problems.push_back("schedule: expected an array");
    for (std::size_t i = 0; sched.is_array() && i < sched.size(); ++i) {
      const std::string path = "schedule[" + std::to_string(i) + "]";
      ScheduledIntervention si;
      if (!sched[i].is_object() || !sched[i].contains("tick") || !sched[i]["tick"].is_number_integer()) {
        problems.push_back(path + ".tick: required integer");
      } else {
        si.tick = sched[i]["tick"].get<int>();
      }
      si.intervention = intervention_from_json_impl(sched[i], path, problems, {"tick"});
      c.schedule.push_back(std::move(si));
    }
  }

  if (top.has("run")) {
    Reader r(top.raw("run"), "run", problems);
    c.run.horizon_ticks = r.get<int>("horizon_ticks", c.run.horizon_ticks);
    c.run.tick_length_days = r.get<double>("tick_length_days", c.run.tick_length_days);
    c.run.epidemic_threshold = r.get<double>("epidemic_threshold", c.run.epidemic_threshold);
    c.run.seed = r.get<std::uint64_t>("seed", c.run.seed);
    c.run.stop_when_extinct = r.get<bool>("stop_when_extinct", c.run.stop_when_extinct);
    r.reject_unknown();
  }

  if (top.has("macro")) {
    Reader m(top.raw("macro"), "macro", problems);
    MacroSpec ms;
    ms.beta = m.get<double>("beta", 0.0);
    ms.gamma = m.get<double>("gamma", 0.0);
    m.reject_unknown();
    c.macro = ms;
  }
  top.reject_unknown();
  return c;
}

}  // namespace

ScenarioError::ScenarioError(std::vector<std::string> problems)
    : std::runtime_error(join_problems(problems)), problems_(std::move(problems)) {}

std::vector<std::string> validate_scenario(const ScenarioConfig& c) {
  std::vector<std::string> problems;
  auto append = [&](std::vector<std::string> more) { problems.insert(problems.end(), more.begin(), more.end()); };

  WorldMap world;
  bool world_ok = true;
  try {
    world = build_world(c.world);
  } catch (const ValidationError& e) {
    append(e.problems());
    world_ok = false;
  }
  append(validate_population_spec(c.population));
  append(validate_disease(c.disease));
  append(validate_channel_params(c.channels));
  append(validate_info_params(c.info));

  if (c.index_cases.count < 0) problems.push_back("index_cases.count must be >= 0");
  if (c.index_cases.count > c.population.count) problems.push_back("index_cases.count exceeds the population");
  if (world_ok && c.index_cases.zone && !world.find(*c.index_cases.zone))
    problems.push_back("index_cases.placement: unknown zone '" + *c.index_cases.zone + "'");

  if (c.run.horizon_ticks < 0) problems.push_back("run.horizon_ticks must be >= 0");
  if (!(c.run.tick_length_days > 0.0)) problems.push_back("run.tick_length_days must be > 0");
  if (!(c.run.epidemic_threshold >= 0.0 && c.run.epidemic_threshold <= 1.0))
    problems.push_back("run.epidemic_threshold outside [0, 1]");

  for (const auto& s : c.schedule) {
    const std::string at = "schedule entry at tick " + std::to_string(s.tick);
    if (s.tick < 1 || s.tick > c.run.horizon_ticks)
      problems.push_back(at + ": tick outside 1.." + std::to_string(c.run.horizon_ticks));
    if (world_ok)
      for (const auto& p : validate_intervention(s.intervention, world)) problems.push_back(at + ": " + p);
  }
  if (c.macro) {
    if (!(c.macro->beta >= 0.0)) problems.push_back("macro.beta must be >= 0");
    if (!(c.macro->gamma > 0.0)) problems.push_back("macro.gamma must be > 0");
  }
  return problems;
}

ScenarioConfig scenario_from_json(const json& doc) {
  std::vector<std::string> problems;
  ScenarioConfig c = scenario_from_json_impl(doc, problems);
  if (problems.empty()) problems = validate_scenario(c);
  if (!problems.empty()) throw ScenarioError(std::move(problems));
  return c;
}

ScenarioConfig parse_scenario(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1;
    for (std::size_t k = 0; k < std::min(e.byte, text.size()); ++k)
      if (text[k] == '\n') ++line;
    throw ScenarioError({"parse error at line " + std::to_string(line) + ": " + e.what()});
  }
  return scenario_from_json(doc);
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError({"cannot open scenario file '" + path.string() + "'"});
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str());
}

Intervention intervention_from_json(const json& j) {
  std::vector<std::string> problems;
  Intervention iv = intervention_from_json_impl(j, "intervention", problems, {"tick"});
  if (!problems.empty()) throw ScenarioError(std::move(problems));
  return iv;
}

json intervention_to_json(const Intervention& iv) {
  json j;
  j["kind"] = std::string(to_string(iv.kind));
  switch (iv.kind) {
    case InterventionKind::Warning:
      if (iv.global) j["audience"] = "global";
      else j["audience"] = iv.zones;
      break;
    case InterventionKind::AreaRestriction:
    case InterventionKind::LiftRestriction:
      j["zones"] = iv.zones;
      break;
    case InterventionKind::CureQuest:
      if (iv.start_tick) j["start_tick"] = *iv.start_tick;
      j["uptake_probability_per_tick"] = iv.uptake_probability_per_tick;
      j["efficacy"] = iv.efficacy;
      j["grants_immunity"] = iv.grants_immunity;
      j["requires_cure_sensitive_stage"] = iv.requires_cure_sensitive_stage;
      break;
    case InterventionKind::SymptomMask:
      j["uptake_probability_per_tick"] = iv.uptake_probability_per_tick;
      break;
    case InterventionKind::TemporaryCure:
      j["uptake_probability_per_tick"] = iv.uptake_probability_per_tick;
      j["efficacy"] = iv.efficacy;
      break;
    case InterventionKind::Hotfix:
      j["channel"] = std::string(to_string(iv.channel));
      j["new_beta"] = iv.new_beta;
      break;
  }
  return j;
}

DiseaseDefinition disease_from_json(const json& j) {
  std::vector<std::string> problems;
  DiseaseDefinition d = disease_from_json_impl(j, "disease", problems);
  if (!problems.empty()) throw ScenarioError(std::move(problems));
  return d;
}

json disease_to_json(const DiseaseDefinition& d) {
  json j;
  j["name"] = d.name;
  j["stages"] = json::array();
  for (const auto& s : d.stages) {
    json st;
    st["name"] = s.name;
    st["duration"] = s.duration_kind == DurationKind::Uniform ? "uniform" : "geometric";
    if (s.duration_kind == DurationKind::Uniform) {
      st["duration_min"] = s.duration_min_days;
      st["duration_max"] = s.duration_max_days;
    } else {
      st["exit_probability"] = s.exit_probability_per_tick;
    }
    st["infectiousness"] = s.infectiousness_multiplier;
    st["symptoms_visible"] = s.symptoms_visible;
    st["mobility"] = s.mobility_modifier;
    st["withdrawal_probability"] = s.withdrawal_probability_per_tick;
    st["withdrawal_window"] = s.withdrawal_window_ticks;
    st["mortality_hazard"] = s.mortality_hazard_per_tick;
    st["cure_sensitive"] = s.cure_sensitive;
    j["stages"].push_back(st);
  }
  for (ChannelKind c : kAllChannels) j["beta"][std::string(to_string(c))] = d.beta(c);
  j["immunity_on_recovery"] = d.grants_immunity_on_recovery;
  if (d.immunity_duration_ticks) j["immunity_duration_ticks"] = *d.immunity_duration_ticks;
  j["immune_can_transmit"] = d.immune_can_transmit;
  j["carrier_ticks"] = d.carrier_ticks;
  j["carrier_infectiousness"] = d.carrier_infectiousness_multiplier;
  j["heal_mitigation"] = d.heal_mitigation;
  if (d.mutation) {
    j["mutation"] = {{"per_tick_probability", d.mutation->per_tick_probability},
                     {"beta_fraction", d.mutation->beta_perturbation_fraction},
                     {"severity_fraction", d.mutation->severity_perturbation_fraction}};
  }
  return j;
}

json scenario_to_json(const ScenarioConfig& c) {
  json j;
  j["name"] = c.name;
  if (!c.description.empty()) j["description"] = c.description;
  for (const auto& z : c.world.zones)
    j["world"]["zones"].push_back({{"name", z.name}, {"density", z.density_weight}, {"city", z.is_city}, {"adjacent", z.adjacent}});
  j["world"]["teleports"] = json::array();
  for (const auto& [a, b] : c.world.teleports) j["world"]["teleports"].push_back({a, b});
  auto& p = j["population"];
  p["count"] = c.population.count;
  for (const auto& v : c.population.vocations)
    p["vocations"].push_back({{"label", v.label}, {"weight", v.weight}, {"heal_min", v.heal_min}, {"heal_max", v.heal_max}});
  p["level_min"] = c.population.level_min;
  p["level_max"] = c.population.level_max;
  p["social_degree_mean"] = c.population.social_degree_mean;
  p["pets_per_avatar_mean"] = c.population.pets_per_avatar_mean;
  const auto& b = c.population.behavior;
  j["behavior"] = {{"curiosity_mean", b.curiosity_mean},
                   {"risk_aversion_mean", b.risk_aversion_mean},
                   {"trait_spread", b.trait_spread},
                   {"move_probability", b.move_probability}};
  j["disease"] = disease_to_json(c.disease);
  const auto& ch = c.channels;
  j["channels"] = {{"zone_chat_participation", ch.zone_chat_participation},
                   {"global_chat_participation", ch.global_chat_participation},
                   {"message_send_probability", ch.message_send_probability},
                   {"pet_shedding_ticks", ch.pet_shedding_ticks},
                   {"pet_dismiss_probability", ch.pet_dismiss_probability},
                   {"pet_resummon_probability", ch.pet_resummon_probability}};
  j["info"] = {{"observe_probability", c.info.observe_probability}, {"beta_info", c.info.beta_info}, {"decay", c.info.decay}};
  j["index_cases"] = {{"count", c.index_cases.count}, {"placement", c.index_cases.zone.value_or("random")}};
  j["schedule"] = json::array();
  for (const auto& s : c.schedule) {
    json e = intervention_to_json(s.intervention);
    e["tick"] = s.tick;
    j["schedule"].push_back(e);
  }
  j["run"] = {{"horizon_ticks", c.run.horizon_ticks},
              {"tick_length_days", c.run.tick_length_days},
              {"epidemic_threshold", c.run.epidemic_threshold},
              {"seed", c.run.seed},
              {"stop_when_extinct", c.run.stop_when_extinct}};
  if (c.macro) j["macro"] = {{"beta", c.macro->beta}, {"gamma", c.macro->gamma}};
  return j;
}

std::filesystem::path bundled_scenario_dir() {
  if (const char* env = std::getenv("VPLAGUE_SCENARIO_DIR")) return env;
#ifdef VPLAGUE_SCENARIO_DIR
  return VPLAGUE_SCENARIO_DIR;
#else
  return "scenarios";
#endif
}

std::filesystem::path resolve_scenario_path(const std::string& name_or_path) {
  std::filesystem::path p(name_or_path);
  if (std::filesystem::exists(p)) return p;
  auto bundled = bundled_scenario_dir() / (name_or_path + ".json");
  if (std::filesystem::exists(bundled)) return bundled;
  return p;
}

std::optional<SirParams> macro_params_for(const ScenarioConfig& c) {
  SirParams p;
  p.population_n = c.population.count;
  p.i0 = c.index_cases.count;
  p.s0 = p.population_n - p.i0;
  p.r0_count = 0.0;
  if (c.macro) {
    p.beta_macro = c.macro->beta;
    p.gamma = c.macro->gamma;
    return p;
  }
  if (c.disease.stages.size() != 1 || c.disease.stages[0].duration_kind != DurationKind::Geometric) return std::nullopt;
  const double per_tick = c.disease.beta(ChannelKind::Proximity) * c.disease.stages[0].infectiousness_multiplier;
  p.beta_macro = per_tick * p.population_n / c.run.tick_length_days;
  p.gamma = c.disease.stages[0].exit_probability_per_tick / c.run.tick_length_days;
  return p;
}

}  // namespace vplague
