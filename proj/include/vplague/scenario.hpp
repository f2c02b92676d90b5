#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "vplague/behavior.hpp"
#include "vplague/disease.hpp"
#include "vplague/intervention.hpp"
#include "vplague/population.hpp"
#include "vplague/sir.hpp"
#include "vplague/transmission.hpp"
#include "vplague/world.hpp"

namespace vplague {

struct IndexCaseSpec {
  int count = 1;
  std::optional<std::string> zone;  // absent: anywhere
};

struct RunParams {
  int horizon_ticks = 365;
  double tick_length_days = 1.0;
  double epidemic_threshold = 0.05;
  std::uint64_t seed = 1;
  /// Stop early once nothing is infected (including carriers and pet
  /// reservoirs) and the schedule is exhausted.
  bool stop_when_extinct = true;
};

/// Macro parameters for the SIR comparison; derived from the disease when absent.
struct MacroSpec {
  double beta = 0.0;
  double gamma = 0.0;
};

struct ScenarioConfig {
  std::string name;
  std::string description;
  WorldSpec world;
  PopulationSpec population;
  DiseaseDefinition disease;
  ChannelParams channels;
  InfoParams info;
  IndexCaseSpec index_cases;
  std::vector<ScheduledIntervention> schedule;
  RunParams run;
  std::optional<MacroSpec> macro;
};

/// Problems found while reading a scenario document.
class ScenarioError : public std::runtime_error {
public:
  explicit ScenarioError(std::vector<std::string> problems);
  const std::vector<std::string>& problems() const { return problems_; }

private:
  std::vector<std::string> problems_;
};

/// Parses and validates. Errors carry the offending field path, and the line
/// for syntax errors.
ScenarioConfig parse_scenario(const std::string& text);
ScenarioConfig scenario_from_json(const nlohmann::json& doc);
ScenarioConfig load_scenario(const std::filesystem::path& path);

nlohmann::json scenario_to_json(const ScenarioConfig& config);

/// Runs every module-level validation; returns all violations.
std::vector<std::string> validate_scenario(const ScenarioConfig& config);

Intervention intervention_from_json(const nlohmann::json& j);
nlohmann::json intervention_to_json(const Intervention& iv);
DiseaseDefinition disease_from_json(const nlohmann::json& j);
nlohmann::json disease_to_json(const DiseaseDefinition& d);

/// Directory holding the bundled scenarios.
std::filesystem::path bundled_scenario_dir();
/// Accepts a path, or the name of a bundled scenario ("gray-plague").
std::filesystem::path resolve_scenario_path(const std::string& name_or_path);

/// Macro parameters matching the scenario: the explicit macro section, else
/// beta = proximity beta * population and gamma = exit probability of a
/// single geometric stage.
std::optional<SirParams> macro_params_for(const ScenarioConfig& config);

}  // namespace vplague
