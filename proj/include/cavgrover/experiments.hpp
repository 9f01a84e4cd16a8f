#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "cavgrover/propagator.hpp"
#include "cavgrover/pulse.hpp"

namespace cavgrover {

// ---------------------------------------------------------------------------
// Effective three-level dynamics with N = 8, epsilon = 0.05 and a Gaussian Omega.

struct Figure3Options {
  int n_atoms = 8;
  double epsilon = 0.05;
  double width = 1.0;
  double cutoff = 4.0;
  std::size_t n_samples = 4000;
  long steps = 0;  // 0: 200 steps per 1/Lambda_max
};

struct Figure3Result {
  SystemParams<double> params;
  PulseSchedule schedule;
  Trajectory trajectory;
  double initial_marked = 0.0;    // P_N(t_i)
  double initial_unmarked = 0.0;  // P_u(t_i)
  double final_marked = 0.0;
  double final_unmarked = 0.0;
  double threshold = 0.0;  // 1 - epsilon^2
  /// Largest decrease of P_N below its running maximum.
  double marked_max_drop = 0.0;
  bool passed = false;
  std::vector<std::string> failures;
};

Figure3Result run_figure3(const Figure3Options& options = {});

// ---------------------------------------------------------------------------
// Duration scaling at fixed mean amplitude.

struct SweepOptions {
  double mean_amplitude = 1.0;
  std::size_t n_samples = 4000;
  double steps_per_period = 200.0;
  bool parallel = true;
};

struct ScalingRecord {
  int n_atoms = 0;
  double epsilon = 0.0;
  double duration = 0.0;             // process duration
  double mean_amplitude = 0.0;       // area / duration
  double area = 0.0;                 // mean amplitude times duration
  double normalized_area = 0.0;      // epsilon * area / sqrt(N-1), 1 by design
  double omega_prime_area = 0.0;     // integral of Omega'
  double scaled_omega_prime_area = 0.0;  // epsilon * integral of Omega'
  double fidelity = 0.0;             // final P_N
  long steps = 0;
  bool passed = false;
};

struct ScalingFit {
  double slope = 0.0;      // of log(duration) against log(N-1)
  double intercept = 0.0;
  double residual = 0.0;   // root-mean-square of the fit residuals
};

struct ScalingReport {
  double epsilon = 0.0;
  std::string pulse;
  std::vector<ScalingRecord> records;
  ScalingFit fit;
  bool passed = false;
  std::vector<std::string> failures;
};

ScalingFit fit_power_law(const std::vector<ScalingRecord>& records);

ScalingReport sweep_scaling(const std::vector<int>& n_list, double epsilon, const PulseShape& shape,
                            const SweepOptions& options = {});

void write_scaling_table(std::ostream& os, const ScalingReport& report,
                         const std::vector<std::string>& header = {});
nlohmann::json to_json(const ScalingReport& report);

// ---------------------------------------------------------------------------
// Model hierarchy and resonant-approximation checks.

struct CompareOptions {
  int n_atoms = 8;
  double epsilon = 0.05;
  double coupling_g = 0.0;  // 0: 100 * Omega_peak / N
  double delta = 0.0;       // 0: delta * duration = 1e3
  GaussianPulse pulse{};
  std::size_t n_samples = 4000;
  double steps_per_period = 200.0;
  long steps = 0;          // overrides steps_per_period when > 0
  int full_max_atoms = 64;  // skip the full-sector run above this size
};

struct ModelComparison {
  int n_atoms = 0;
  double epsilon = 0.0;
  double coupling_g = 0.0;
  double delta = 0.0;
  double delta_duration = 0.0;    // delta * process duration
  double small_parameter = 0.0;   // Omega_peak / (N G)
  long steps = 0;

  double effective_vs_collective = 0.0;   // max population deviation, rwa
  double rwa_population_deviation = 0.0;  // collective rwa vs counter-rotating
  double rwa_fidelity_difference = 0.0;   // |P_N(t_f)| difference of the same pair
  double collective_vs_full = 0.0;        // NaN when the full run is skipped
  double full_residual = 0.0;             // weight outside the collective subspace

  double fidelity_effective = 0.0;
  double fidelity_collective = 0.0;
  double fidelity_counter_rotating = 0.0;
  double max_excited_population = 0.0;    // peak of P(g,1) + P(e_u) + P(e_N), rwa run
};

ModelComparison compare_models(const CompareOptions& options = {});

void write_comparison(std::ostream& os, const ModelComparison& report,
                      const std::vector<std::string>& header = {});
nlohmann::json to_json(const ModelComparison& report);

}  // namespace cavgrover
