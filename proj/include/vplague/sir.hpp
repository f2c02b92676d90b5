#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace vplague {

/// Frequency-dependent SIR: dS/dt = -b S I / N, dI/dt = b S I / N - g I,
/// dR/dt = g I.
struct SirParams {
  double beta_macro = 0.0;
  double gamma = 1.0;
  double population_n = 1.0;
  double s0 = 1.0;
  double i0 = 0.0;
  double r0_count = 0.0;
};

std::vector<std::string> validate_sir(const SirParams& p);

struct SirTrajectory {
  double population_n = 0.0;
  std::vector<double> t, s, i, r;

  std::size_t size() const { return t.size(); }
};

class IntegrationError : public std::runtime_error {
public:
  IntegrationError(const std::string& what, std::size_t step) : std::runtime_error(what), step_(step) {}
  std::size_t step() const { return step_; }

private:
  std::size_t step_;
};

/// Fixed-step classical RK4 from t = 0 to `horizon`. The last step is
/// shortened when `horizon` is not a multiple of `dt`.
SirTrajectory integrate_sir(const SirParams& params, double dt, double horizon);

/// Ex-ante reproduction number b / g.
double macro_r0(const SirParams& params);

struct MicroSeries {
  std::vector<double> time_days;  // increasing
  std::vector<double> infected;
  double final_size = 0.0;  // ever infected
};

struct DivergenceReport {
  double mean_abs_gap_infected = 0.0;  // per-point L1 gap on I
  double total_abs_gap_infected = 0.0;
  double peak_time_macro = 0.0;
  double peak_time_micro = 0.0;
  double peak_time_gap = 0.0;
  double final_size_macro = 0.0;
  double final_size_micro = 0.0;
  double final_size_gap = 0.0;
};

/// The trajectory is linearly interpolated onto the micro time points; a micro
/// series reaching past the trajectory horizon is an error.
DivergenceReport compare_macro_micro(const SirTrajectory& trajectory, const MicroSeries& micro);

void write_sir_csv(std::ostream& out, const SirTrajectory& trajectory);

}  // namespace vplague
