#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "vplague/metrics.hpp"
#include "vplague/scenario.hpp"
#include "vplague/simulation.hpp"

namespace vplague {

struct RunOptions {
  std::optional<std::uint64_t> seed;
  bool events = false;
  bool stop_after_index_completion = false;
};

struct RunResult {
  std::uint64_t seed = 0;
  WorldMap world;
  std::size_t population = 0;
  std::vector<TickSnapshot> snapshots;
  TransmissionTree tree;
  RunSummary summary;
  std::vector<std::string> events;
};

RunResult run_scenario(const ScenarioConfig& config, const RunOptions& options = {});

struct Stat {
  int n = 0;
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation; 0 for n < 2
};

Stat describe(const std::vector<double>& xs);

struct SeededSummary {
  std::uint64_t seed = 0;
  RunSummary summary;
};

struct BatchResult {
  std::vector<SeededSummary> runs;  // in seed order
  Stat attack_rate, peak_prevalence, peak_tick, deaths, duration;
  Stat r0_first_generation, r0_weighted;  // over runs where defined
  double epidemic_fraction = 0.0;
};

/// Independent runs, one per seed, spread over `threads` workers. Results do
/// not depend on the thread count.
BatchResult run_batch(const ScenarioConfig& config, const std::vector<std::uint64_t>& seeds, unsigned threads = 0);

void write_batch(std::ostream& out, const BatchResult& b);

struct TuneResult {
  double beta = 0.0;
  std::optional<double> achieved_r0;
  int iterations = 0;
  bool converged = false;
};

/// Pooled first-generation R0 (offspring of completed index cases) over the
/// seeds, with `channel` beta set to `beta`.
std::optional<double> first_generation_r0(const ScenarioConfig& config, ChannelKind channel, double beta,
                                          const std::vector<std::uint64_t>& seeds, unsigned threads = 0);

/// Why `channel` can never carry an infection in this scenario, if it cannot.
std::optional<std::string> unusable_channel(const ScenarioConfig& config, ChannelKind channel);

/// Bisection on one channel's beta over [0, 1] until pooled first-generation
/// R0 is within `tolerance` of `target`. Every evaluation reuses the same
/// seeds. Without convergence the closest evaluation is returned. Throws
/// std::invalid_argument for a negative target or an unusable channel.
TuneResult tune_beta_for_target_r0(const ScenarioConfig& config, ChannelKind channel, double target,
                                   const std::vector<std::uint64_t>& seeds, double tolerance = 0.05,
                                   int max_iterations = 20, unsigned threads = 0);

}  // namespace vplague
