// vplague command-line front end: run, batch, tune, compare-sir, serve.
#include <CLI11.hpp>

#include <charconv>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "vplague/metrics.hpp"
#include "vplague/runner.hpp"
#include "vplague/scenario.hpp"
#include "vplague/sir.hpp"
#ifdef VPLAGUE_WITH_SERVICE
#include "vplague/service/server.hpp"
#endif

namespace fs = std::filesystem;
using namespace vplague;

namespace {

std::vector<std::uint64_t> parse_seed_range(const std::string& text) {
  auto num = [&](std::string_view s) {
    std::uint64_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size()) throw CLI::ValidationError("--seeds", "expected N or N..M, got '" + text + "'");
    return v;
  };
  const auto dots = text.find("..");
  if (dots == std::string::npos) return {num(text)};
  const auto lo = num(std::string_view(text).substr(0, dots));
  const auto hi = num(std::string_view(text).substr(dots + 2));
  if (hi < lo) throw CLI::ValidationError("--seeds", "empty range '" + text + "'");
  std::vector<std::uint64_t> out;
  for (auto s = lo; s <= hi; ++s) out.push_back(s);
  return out;
}

std::ofstream open_out(const fs::path& dir, const char* name) {
  std::ofstream f(dir / name);
  if (!f) throw std::runtime_error("cannot write " + (dir / name).string());
  return f;
}

ScenarioConfig load(const std::string& scenario, std::optional<double> threshold) {
  auto c = load_scenario(resolve_scenario_path(scenario));
  if (threshold) c.run.epidemic_threshold = *threshold;
  return c;
}

void print_r0(std::ostream& out, const R0Estimate& r0) {
  auto opt = [](std::optional<double> v) { return v ? std::to_string(*v) : std::string("undefined"); };
  out << "r0_first_generation: " << opt(r0.first_generation) << '\n';
  out << "r0_weighted: " << opt(r0.weighted_all) << '\n';
  for (const auto& g : r0.per_generation)
    out << "  generation " << g.generation << ": cases " << g.cases << " offspring " << g.offspring << " mean "
        << opt(g.mean) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"vplague: agent-based virtual plague simulator"};
  app.require_subcommand(1);

  std::string scenario = "gray-plague";
  std::optional<std::uint64_t> seed;
  std::string seeds = "1..20";
  std::string out_dir;
  bool events = false;
  std::optional<double> threshold;
  unsigned threads = 0;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--scenario", scenario, "Scenario file or bundled name")->capture_default_str();
    sub->add_option("--threshold", threshold, "Epidemic threshold (attack-rate fraction)");
  };

  auto* run = app.add_subcommand("run", "Run one scenario and write its outputs");
  common(run);
  run->add_option("--seed", seed, "Override the scenario seed");
  run->add_option("--out", out_dir, "Output directory");
  run->add_flag("--events", events, "Write the NDJSON event log");

  auto* batch = app.add_subcommand("batch", "Run many seeds and aggregate");
  common(batch);
  batch->add_option("--seeds", seeds, "Seed or range N..M")->capture_default_str();
  batch->add_option("--out", out_dir, "Output directory");
  batch->add_option("--threads", threads, "Worker threads (0 = all cores)");

  std::string channel_name = "Proximity";
  double target = 1.0, tolerance = 0.1;
  auto* tune = app.add_subcommand("tune", "Bisect one channel's beta to a target first-generation R0");
  common(tune);
  tune->add_option("--seeds", seeds, "Seeds evaluated per bisection step")->capture_default_str();
  tune->add_option("--channel", channel_name, "Channel to tune")->capture_default_str();
  tune->add_option("--target", target, "Target R0")->capture_default_str();
  tune->add_option("--tolerance", tolerance, "Absolute tolerance on R0")->capture_default_str();
  tune->add_option("--threads", threads, "Worker threads (0 = all cores)");

  double dt = 0.1;
  auto* compare = app.add_subcommand("compare-sir", "Compare one run with the matching SIR model");
  common(compare);
  compare->add_option("--seed", seed, "Override the scenario seed");
  compare->add_option("--out", out_dir, "Output directory");
  compare->add_option("--dt", dt, "RK4 step in days")->capture_default_str();

  std::string host = "127.0.0.1";
  int port = 8080;
  auto* serve = app.add_subcommand("serve", "Serve live sessions over HTTP");
  serve->add_option("--host", host)->capture_default_str();
  serve->add_option("--port", port)->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      const auto config = load(scenario, threshold);
      RunOptions o;
      o.seed = seed;
      o.events = events;
      const auto r = run_scenario(config, o);
      write_summary(std::cout, r.summary);
      if (!out_dir.empty()) {
        fs::create_directories(out_dir);
        auto summary = open_out(out_dir, "summary.txt");
        summary << "scenario: " << config.name << "\nseed: " << r.seed << '\n';
        write_summary(summary, r.summary);
        print_r0(summary, estimate_r0(r.tree));
        auto snaps = open_out(out_dir, "snapshots.csv");
        write_snapshots_csv(snaps, r.snapshots, r.world);
        auto tree = open_out(out_dir, "tree.ndjson");
        write_tree_ndjson(tree, r.tree);
        if (events) {
          auto log = open_out(out_dir, "events.ndjson");
          for (const auto& l : r.events) log << l << '\n';
        }
      } else if (events) {
        for (const auto& l : r.events) std::cout << l << '\n';
      }
      return 0;
    }
    if (*batch) {
      const auto config = load(scenario, threshold);
      const auto b = run_batch(config, parse_seed_range(seeds), threads);
      write_batch(std::cout, b);
      if (!out_dir.empty()) {
        fs::create_directories(out_dir);
        auto summary = open_out(out_dir, "summary.txt");
        summary << "scenario: " << config.name << '\n';
        write_batch(summary, b);
        auto runs = open_out(out_dir, "runs.csv");
        runs << "seed,attack_rate,ever_infected,peak_prevalence,peak_tick,deaths,duration,epidemic,r0_first,r0_weighted\n";
        for (const auto& r : b.runs) {
          const auto& s = r.summary;
          runs << r.seed << ',' << s.attack_rate << ',' << s.ever_infected << ',' << s.peak_prevalence << ','
               << s.peak_tick << ',' << s.deaths << ',' << s.duration << ',' << s.epidemic_occurred << ','
               << (s.r0_first_generation ? std::to_string(*s.r0_first_generation) : "") << ','
               << (s.r0_weighted ? std::to_string(*s.r0_weighted) : "") << '\n';
        }
      }
      return 0;
    }
    if (*tune) {
      const auto config = load(scenario, threshold);
      const auto channel = parse_channel(channel_name);
      if (!channel) throw std::invalid_argument("unknown channel '" + channel_name + "'");
      const auto t = tune_beta_for_target_r0(config, *channel, target, parse_seed_range(seeds), tolerance, 20, threads);
      std::cout << "channel: " << channel_name << "\nbeta: " << t.beta << "\nachieved_r0: "
                << (t.achieved_r0 ? std::to_string(*t.achieved_r0) : "undefined") << "\niterations: " << t.iterations
                << "\nconverged: " << (t.converged ? "yes" : "no") << '\n';
      return t.converged ? 0 : 2;
    }
    if (*compare) {
      const auto config = load(scenario, threshold);
      const auto params = macro_params_for(config);
      if (!params)
        throw std::invalid_argument("scenario has no macro section and its disease is not a single geometric stage");
      RunOptions o;
      o.seed = seed;
      const auto r = run_scenario(config, o);
      MicroSeries micro;
      for (const auto& s : r.snapshots) {
        micro.time_days.push_back(s.tick * config.run.tick_length_days);
        micro.infected.push_back(s.totals().infected);
      }
      micro.final_size = r.summary.ever_infected;
      const double horizon = std::max(micro.time_days.back(), config.run.horizon_ticks * config.run.tick_length_days);
      const auto traj = integrate_sir(*params, dt, horizon);
      const auto d = compare_macro_micro(traj, micro);
      const auto r0 = estimate_r0(r.tree);
      std::cout << "macro_r0: " << macro_r0(*params) << "\nmicro_r0_first_generation: "
                << (r0.first_generation ? std::to_string(*r0.first_generation) : "undefined")
                << "\nmean_abs_gap_infected: " << d.mean_abs_gap_infected << "\npeak_time_macro: " << d.peak_time_macro
                << "\npeak_time_micro: " << d.peak_time_micro << "\nfinal_size_macro: " << d.final_size_macro
                << "\nfinal_size_micro: " << d.final_size_micro << '\n';
      if (!out_dir.empty()) {
        fs::create_directories(out_dir);
        auto csv = open_out(out_dir, "sir.csv");
        write_sir_csv(csv, traj);
        auto snaps = open_out(out_dir, "snapshots.csv");
        write_snapshots_csv(snaps, r.snapshots, r.world);
      }
      return 0;
    }
    if (*serve) {
#ifdef VPLAGUE_WITH_SERVICE
      service::SessionManager sessions;
      service::Server server(sessions);
      std::cerr << "listening on http://" << host << ':' << port << '\n';
      return server.listen(host, port) ? 0 : 1;
#else
      std::cerr << "built without the service\n";
      return 1;
#endif
    }
  } catch (const ScenarioError& e) {
    std::cerr << "scenario error:\n";
    for (const auto& p : e.problems()) std::cerr << "  " << p << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
