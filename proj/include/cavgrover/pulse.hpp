#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "cavgrover/hamiltonians.hpp"

namespace cavgrover {

/// Omega(t) = peak * exp(-((t - center)/width)^2), truncated to center +- cutoff*width.
struct GaussianPulse {
  double peak = 1.0;
  double width = 1.0;
  double center = 0.0;
  double cutoff = 4.0;

  void validate() const;
  double t_start() const { return center - cutoff * width; }
  double t_end() const { return center + cutoff * width; }
  double value(double t) const;
  /// Closed-form area from t_start() to t (error functions).
  double exact_area(double t) const;
};

/// Unit-scale pulse profile on the normalized window tau in [-1, 1]. The
/// designer fixes the overall amplitude; only the shape matters here.
struct PulseShape {
  std::string name;
  std::function<double(double)> profile;
  double cutoff = 0.0;  // Gaussian cutoff factor c, 0 for other shapes
};

/// exp(-(c tau)^2): the Gaussian of width T on the window +- c T.
PulseShape gaussian_shape(double cutoff = 4.0);

/// A shape placed on a concrete time window.
struct BasePulse {
  PulseShape shape;
  double t_start = -1.0;
  double t_end = 1.0;

  double value(double t) const;
};

BasePulse to_base_pulse(const GaussianPulse& pulse);

/// Area of the Gaussian from its window start to t, by composite Simpson.
double cumulative_area(const GaussianPulse& pulse, double t);

/// Area of `amplitude * pulse` from its window start to t, by composite Simpson.
double cumulative_area(const BasePulse& pulse, double amplitude, double t);

struct RatioResult {
  double ratio;    // Omega'/Omega
  bool completed;  // epsilon * area reached sqrt(N-1); ratio clamped to 0
};

/// Omega'/Omega that keeps theta_dot = epsilon * Lambda, starting from Omega' = Omega.
RatioResult ratio_from_rho(int n_atoms, double epsilon, double area);

/// Linearly interpolated schedule value and its slope on the enclosing segment.
struct ScheduleSample {
  double omega;
  double omega_prime;
  double omega_dot;
  double omega_prime_dot;
};

/// Sampled pulse pair on a strictly increasing grid.
struct PulseSchedule {
  int n_atoms = 2;
  double epsilon = 0.05;
  std::vector<double> grid;
  std::vector<double> omega;
  std::vector<double> omega_prime;
  std::vector<double> area;  // cumulative area of omega from grid.front()

  // Descriptive fields for exports.
  std::string pulse_name = "samples";
  double peak = 0.0;    // max of omega
  double width = 0.0;   // Gaussian width T, 0 otherwise
  double cutoff = 0.0;  // Gaussian cutoff c, 0 otherwise

  /// Builds a schedule from arbitrary samples; the area is integrated from the samples.
  static PulseSchedule from_samples(int n_atoms, double epsilon, std::vector<double> grid,
                                    std::vector<double> omega, std::vector<double> omega_prime);

  double t_start() const { return grid.front(); }
  double t_end() const { return grid.back(); }
  double duration() const { return grid.back() - grid.front(); }
  std::size_t size() const { return grid.size(); }

  /// Total area over the duration, i.e. mean amplitude times duration.
  double total_area() const { return area.back(); }
  double mean_amplitude() const { return total_area() / duration(); }
  /// Integral of Omega' over the schedule.
  double omega_prime_area() const;
  /// Mixing angle at each sample.
  std::vector<double> theta() const;

  ScheduleSample at(double t) const;
};

/// Designs the pulse pair for a Gaussian base pulse. The input peak is ignored:
/// the peak is set so that epsilon times the truncated-window area is sqrt(N-1),
/// i.e. peak*T = sqrt(N-1)/(epsilon sqrt(pi) erf(c)).
PulseSchedule design_schedule(int n_atoms, double epsilon, const GaussianPulse& pulse,
                              std::size_t n_samples);

/// Same law for any base shape; the amplitude is fixed by the numerical area.
PulseSchedule design_schedule(int n_atoms, double epsilon, const BasePulse& pulse,
                              std::size_t n_samples);

/// Peak amplitude the Gaussian design uses.
double designed_gaussian_peak(int n_atoms, double epsilon, const GaussianPulse& pulse);

void validate_design_inputs(int n_atoms, double epsilon, std::size_t n_samples);

struct AdiabaticityReport {
  double epsilon;
  double max_deviation;  // max |theta_dot/Lambda - epsilon| over the grid interior
  double worst_time;
};

/// Reconstructs theta from the sampled ratio, differentiates it by central
/// differences and compares theta_dot/Lambda with epsilon.
AdiabaticityReport verify_adiabaticity(const PulseSchedule& schedule, const SystemParams<double>& params);

/// Columns t, Omega, Omega', area, theta after a header carrying N, epsilon, peak, T, c
/// and any extra `# ` lines passed in.
void write_schedule(std::ostream& os, const PulseSchedule& schedule,
                    const std::vector<std::string>& header = {});

/// Composite Simpson on uniformly spaced samples; an odd number of intervals
/// is closed with the 3/8 rule.
double simpson(const std::vector<double>& values, double step);

}  // namespace cavgrover
