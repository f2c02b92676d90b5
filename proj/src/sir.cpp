#include "vplague/sir.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <ostream>

namespace vplague {

std::vector<std::string> validate_sir(const SirParams& p) {
  std::vector<std::string> problems;
  if (!(p.beta_macro >= 0.0)) problems.push_back("sir: beta must be >= 0");
  if (!(p.gamma > 0.0)) problems.push_back("sir: gamma must be > 0");
  if (!(p.population_n > 0.0)) problems.push_back("sir: population must be > 0");
  if (!(p.s0 >= 0.0 && p.i0 >= 0.0 && p.r0_count >= 0.0)) problems.push_back("sir: compartments must be >= 0");
  if (std::abs(p.s0 + p.i0 + p.r0_count - p.population_n) > 1e-9 * std::max(1.0, p.population_n))
    problems.push_back("sir: s0 + i0 + r0 must equal the population");
  return problems;
}

namespace {

using State = std::array<double, 3>;

State deriv(const SirParams& p, const State& y) {
  const double infection = p.beta_macro * y[0] * y[1] / p.population_n;
  const double recovery = p.gamma * y[1];
  return {-infection, infection - recovery, recovery};
}

State axpy(const State& y, double h, const State& k) { return {y[0] + h * k[0], y[1] + h * k[1], y[2] + h * k[2]}; }

}  // namespace

SirTrajectory integrate_sir(const SirParams& params, double dt, double horizon) {
  if (auto problems = validate_sir(params); !problems.empty()) throw std::invalid_argument(problems.front());
  if (!(dt > 0.0) || !(horizon > 0.0) || dt > horizon)
    throw std::invalid_argument("sir: require 0 < dt <= horizon");

  SirTrajectory traj;
  traj.population_n = params.population_n;
  State y{params.s0, params.i0, params.r0_count};
  double t = 0.0;
  auto record = [&] {
    traj.t.push_back(t);
    traj.s.push_back(y[0]);
    traj.i.push_back(y[1]);
    traj.r.push_back(y[2]);
  };
  record();

  const auto full_steps = static_cast<std::size_t>(std::floor(horizon / dt + 1e-9));
  const double tail = horizon - static_cast<double>(full_steps) * dt;
  const std::size_t steps = full_steps + (tail > 1e-9 * dt ? 1 : 0);
  for (std::size_t step = 0; step < steps; ++step) {
    const double h = step < full_steps ? dt : tail;
    const State k1 = deriv(params, y);
    const State k2 = deriv(params, axpy(y, h / 2, k1));
    const State k3 = deriv(params, axpy(y, h / 2, k2));
    const State k4 = deriv(params, axpy(y, h, k3));
    for (int c = 0; c < 3; ++c) y[c] += h / 6.0 * (k1[c] + 2.0 * k2[c] + 2.0 * k3[c] + k4[c]);
    t = step < full_steps ? static_cast<double>(step + 1) * dt : horizon;
    for (double v : y)
      if (!std::isfinite(v))
        throw IntegrationError("sir: non-finite value at step " + std::to_string(step + 1), step + 1);
    record();
  }
  return traj;
}

double macro_r0(const SirParams& params) { return params.beta_macro / params.gamma; }

namespace {

double interpolate(const std::vector<double>& t, const std::vector<double>& v, double x) {
  auto it = std::lower_bound(t.begin(), t.end(), x);
  if (it == t.end()) return v.back();
  const auto k = static_cast<std::size_t>(it - t.begin());
  if (k == 0 || *it == x) return v[k];
  const double w = (x - t[k - 1]) / (t[k] - t[k - 1]);
  return v[k - 1] + w * (v[k] - v[k - 1]);
}

}  // namespace

DivergenceReport compare_macro_micro(const SirTrajectory& traj, const MicroSeries& micro) {
  if (traj.t.empty() || micro.time_days.empty()) throw std::invalid_argument("compare: empty series");
  if (micro.time_days.size() != micro.infected.size()) throw std::invalid_argument("compare: ragged micro series");
  if (micro.time_days.back() > traj.t.back() + 1e-9 || micro.time_days.front() < traj.t.front() - 1e-9)
    throw std::invalid_argument("compare: mismatched horizons (micro series extends past the trajectory)");

  DivergenceReport rep;
  for (std::size_t k = 0; k < micro.time_days.size(); ++k)
    rep.total_abs_gap_infected += std::abs(interpolate(traj.t, traj.i, micro.time_days[k]) - micro.infected[k]);
  rep.mean_abs_gap_infected = rep.total_abs_gap_infected / static_cast<double>(micro.time_days.size());

  const auto macro_peak = std::max_element(traj.i.begin(), traj.i.end()) - traj.i.begin();
  const auto micro_peak = std::max_element(micro.infected.begin(), micro.infected.end()) - micro.infected.begin();
  rep.peak_time_macro = traj.t[static_cast<std::size_t>(macro_peak)];
  rep.peak_time_micro = micro.time_days[static_cast<std::size_t>(micro_peak)];
  rep.peak_time_gap = std::abs(rep.peak_time_macro - rep.peak_time_micro);

  rep.final_size_macro = traj.population_n - traj.s.back();
  rep.final_size_micro = micro.final_size;
  rep.final_size_gap = std::abs(rep.final_size_macro - rep.final_size_micro);
  return rep;
}

void write_sir_csv(std::ostream& out, const SirTrajectory& traj) {
  out << "time,S,I,R\n";
  for (std::size_t k = 0; k < traj.size(); ++k)
    out << traj.t[k] << ',' << traj.s[k] << ',' << traj.i[k] << ',' << traj.r[k] << '\n';
}

}  // namespace vplague
