#include "vplague/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <ostream>
#include <limits>
#include <stdexcept>
#include <mutex>
#include <thread>

namespace vplague {

RunResult run_scenario(const ScenarioConfig& config, const RunOptions& options) {
  SimOptions so;
  so.seed = options.seed;
  so.events = options.events;
  so.stop_after_index_completion = options.stop_after_index_completion;
  Simulation sim(config, so);
  sim.run_to_end();
  RunResult r;
  r.seed = options.seed.value_or(config.run.seed);
  r.world = sim.state().world;
  r.population = sim.state().pop.size();
  r.snapshots = sim.state().snapshots;
  r.tree = sim.tree();
  r.summary = run_summary(r.snapshots, r.tree, r.population, config.run.epidemic_threshold);
  r.events = sim.state().log.lines();
  return r;
}

Stat describe(const std::vector<double>& xs) {
  Stat s;
  s.n = static_cast<int>(xs.size());
  if (xs.empty()) return s;
  double sum = 0.0;
  for (double x : xs) sum += x;
  s.mean = sum / s.n;
  if (s.n > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - s.mean) * (x - s.mean);
    s.stddev = std::sqrt(ss / (s.n - 1));
  }
  return s;
}

namespace {

template <class Fn>
void parallel_for(std::size_t n, unsigned threads, Fn fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(n, 1)));
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < n;) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace

BatchResult run_batch(const ScenarioConfig& config, const std::vector<std::uint64_t>& seeds, unsigned threads) {
  BatchResult b;
  b.runs.resize(seeds.size());
  parallel_for(seeds.size(), threads, [&](std::size_t i) {
    RunOptions o;
    o.seed = seeds[i];
    b.runs[i] = {seeds[i], run_scenario(config, o).summary};
  });
  std::vector<double> ar, pp, pt, de, du, r1, rw;
  int epidemics = 0;
  for (const auto& r : b.runs) {
    ar.push_back(r.summary.attack_rate);
    pp.push_back(r.summary.peak_prevalence);
    pt.push_back(r.summary.peak_tick);
    de.push_back(r.summary.deaths);
    du.push_back(r.summary.duration);
    if (r.summary.r0_first_generation) r1.push_back(*r.summary.r0_first_generation);
    if (r.summary.r0_weighted) rw.push_back(*r.summary.r0_weighted);
    epidemics += r.summary.epidemic_occurred;
  }
  b.attack_rate = describe(ar);
  b.peak_prevalence = describe(pp);
  b.peak_tick = describe(pt);
  b.deaths = describe(de);
  b.duration = describe(du);
  b.r0_first_generation = describe(r1);
  b.r0_weighted = describe(rw);
  b.epidemic_fraction = b.runs.empty() ? 0.0 : static_cast<double>(epidemics) / b.runs.size();
  return b;
}

void write_batch(std::ostream& out, const BatchResult& b) {
  auto line = [&](const char* name, const Stat& s) {
    out << name << ": mean " << s.mean << " sd " << s.stddev << " (n=" << s.n << ")\n";
  };
  out << "runs: " << b.runs.size() << '\n';
  line("attack_rate", b.attack_rate);
  line("peak_prevalence", b.peak_prevalence);
  line("peak_tick", b.peak_tick);
  line("deaths", b.deaths);
  line("duration", b.duration);
  line("r0_first_generation", b.r0_first_generation);
  line("r0_weighted", b.r0_weighted);
  out << "epidemic_fraction: " << b.epidemic_fraction << '\n';
}

std::optional<double> first_generation_r0(const ScenarioConfig& config, ChannelKind channel, double beta,
                                          const std::vector<std::uint64_t>& seeds, unsigned threads) {
  ScenarioConfig c = config;
  c.disease.set_beta(channel, beta);
  std::vector<std::pair<int, int>> per(seeds.size());  // (completed index cases, their offspring)
  parallel_for(seeds.size(), threads, [&](std::size_t i) {
    RunOptions o;
    o.seed = seeds[i];
    o.stop_after_index_completion = true;
    const auto r = run_scenario(c, o);
    const auto offspring = r.tree.offspring_counts();
    for (const auto& rec : r.tree.records()) {
      if (!rec.index_case || !r.tree.completed(rec.case_id)) continue;
      ++per[i].first;
      per[i].second += offspring[rec.case_id];
    }
  });
  int cases = 0, offspring = 0;
  for (auto [c0, o0] : per) {
    cases += c0;
    offspring += o0;
  }
  if (cases == 0) return std::nullopt;
  return static_cast<double>(offspring) / cases;
}

std::optional<std::string> unusable_channel(const ScenarioConfig& c, ChannelKind channel) {
  const bool infectious = std::any_of(c.disease.stages.begin(), c.disease.stages.end(),
                                      [](const StageSpec& s) { return s.infectiousness_multiplier > 0.0; });
  if (!infectious) return "no stage of the disease is infectious";
  switch (channel) {
    case ChannelKind::ZoneChat:
      if (c.channels.zone_chat_participation <= 0.0) return "nobody takes part in zone chat";
      break;
    case ChannelKind::GlobalChat:
      if (c.channels.global_chat_participation <= 0.0) return "nobody takes part in global chat";
      break;
    case ChannelKind::DirectMessage:
      if (c.population.social_degree_mean <= 0.0 || c.channels.message_send_probability <= 0.0)
        return "no messages are ever sent";
      break;
    case ChannelKind::PetVector:
      if (c.population.pets_per_avatar_mean <= 0.0) return "the population has no pets";
      break;
    case ChannelKind::Proximity:
      break;
  }
  return std::nullopt;
}

TuneResult tune_beta_for_target_r0(const ScenarioConfig& config, ChannelKind channel, double target,
                                   const std::vector<std::uint64_t>& seeds, double tolerance, int max_iterations,
                                   unsigned threads) {
  if (!(target >= 0.0)) throw std::invalid_argument("target R0 must be non-negative");
  if (seeds.empty()) throw std::invalid_argument("tuning needs at least one seed");
  if (auto why = unusable_channel(config, channel))
    throw std::invalid_argument("channel " + std::string(to_string(channel)) + " is unusable: " + *why);

  TuneResult out;
  if (target == 0.0) {
    out.beta = 0.0;
    out.achieved_r0 = 0.0;
    out.converged = true;
    return out;
  }

  double best_gap = std::numeric_limits<double>::infinity();
  auto evaluate = [&](double beta) {
    const auto r = first_generation_r0(config, channel, beta, seeds, threads);
    ++out.iterations;
    const double gap = r ? std::abs(*r - target) : std::numeric_limits<double>::infinity();
    if (gap < best_gap || out.iterations == 1) {
      best_gap = gap;
      out.beta = beta;
      out.achieved_r0 = r;
    }
    if (gap <= tolerance) out.converged = true;
    return r;
  };

  double lo = 0.0, hi = 1.0;
  const auto r_hi = evaluate(hi);
  if (out.converged || !r_hi || *r_hi < target) return out;  // beta = 1 already falls short
  while (out.iterations < max_iterations) {
    const double mid = 0.5 * (lo + hi);
    const auto r = evaluate(mid);
    if (out.converged) {
      out.beta = mid;
      out.achieved_r0 = r;
      return out;
    }
    if (!r || *r < target) lo = mid;
    else hi = mid;
  }
  return out;
}

}  // namespace vplague
