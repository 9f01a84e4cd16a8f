#include "cavgrover/pulse.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>

#include "cavgrover/text_format.hpp"

namespace cavgrover {

namespace {

constexpr double kSqrtPi = 1.7724538509055160273;

template <typename F>
double simpson_panels(F&& f, double a, double b, long panels) {
  if (panels % 2) ++panels;
  const double h = (b - a) / static_cast<double>(panels);
  double odd = 0.0;
  double even = 0.0;
  for (long i = 1; i < panels; ++i) (i % 2 ? odd : even) += f(a + h * static_cast<double>(i));
  return h / 3.0 * (f(a) + f(b) + 4.0 * odd + 2.0 * even);
}

bool is_uniform(const std::vector<double>& grid) {
  if (grid.size() < 3) return true;
  const double h = (grid.back() - grid.front()) / static_cast<double>(grid.size() - 1);
  for (std::size_t k = 1; k < grid.size(); ++k)
    if (std::abs(grid[k] - grid[k - 1] - h) > 1e-9 * h) return false;
  return true;
}

std::vector<double> uniform_grid(double a, double b, std::size_t n) {
  std::vector<double> g(n);
  const double h = (b - a) / static_cast<double>(n - 1);
  for (std::size_t k = 0; k < n; ++k) g[k] = a + h * static_cast<double>(k);
  g.back() = b;
  return g;
}

double normalized_time(const BasePulse& p, double t) {
  return 2.0 * (t - p.t_start) / (p.t_end - p.t_start) - 1.0;
}

void check_window(double t, double a, double b) {
  const double slack = 1e-12 * (b - a);
  if (t < a - slack || t > b + slack)
    throw DomainError("time " + format_real(t) + " outside pulse window [" + format_real(a) + ", " +
                      format_real(b) + "]");
}

// The ratio law written in r = sqrt(N-1) - eps*A: (r/s) / sqrt(1 + s^2 - r^2).
double ratio_from_remaining(int n_atoms, double r) {
  const double s = std::sqrt(static_cast<double>(n_atoms - 1));
  if (r <= 0.0) return 0.0;
  return (r / s) / std::sqrt(1.0 + s * s - r * r);
}

// Fills omega, area and omega_prime on a uniform grid for a fixed amplitude.
PulseSchedule sample_design(int n_atoms, double epsilon, const BasePulse& pulse, double amplitude,
                            std::size_t n_samples) {
  constexpr long kSubPanels = 16;
  PulseSchedule s;
  s.n_atoms = n_atoms;
  s.epsilon = epsilon;
  s.pulse_name = pulse.shape.name;
  s.cutoff = pulse.shape.cutoff;
  s.grid = uniform_grid(pulse.t_start, pulse.t_end, n_samples);
  s.omega.resize(n_samples);
  s.omega_prime.resize(n_samples);
  s.area.resize(n_samples);
  const auto f = [&](double t) { return amplitude * pulse.value(t); };
  std::vector<double> piece(n_samples, 0.0);
  for (std::size_t k = 1; k < n_samples; ++k) piece[k] = simpson_panels(f, s.grid[k - 1], s.grid[k], kSubPanels);
  s.area[0] = 0.0;
  for (std::size_t k = 1; k < n_samples; ++k) s.area[k] = s.area[k - 1] + piece[k];
  // Area still to come, summed from t_f backwards. Near completion sqrt(N-1) - eps*A
  // cancels badly while Lambda -> 0, so the late samples use this instead.
  std::vector<double> remaining(n_samples, 0.0);
  for (std::size_t k = n_samples - 1; k-- > 0;) remaining[k] = remaining[k + 1] + piece[k + 1];
  const double root = std::sqrt(static_cast<double>(n_atoms - 1));
  for (std::size_t k = 0; k < n_samples; ++k) {
    s.omega[k] = f(s.grid[k]);
    const double ratio = epsilon * s.area[k] < 0.5 * root
                             ? ratio_from_rho(n_atoms, epsilon, s.area[k]).ratio
                             : ratio_from_remaining(n_atoms, epsilon * remaining[k]);
    s.omega_prime[k] = ratio * s.omega[k];
  }
  s.peak = *std::max_element(s.omega.begin(), s.omega.end());
  return s;
}

}  // namespace

void GaussianPulse::validate() const {
  if (!(width > 0.0)) throw InvalidParameter("pulse width T must be > 0");
  if (!(cutoff >= 3.0)) throw InvalidParameter("pulse cutoff factor c must be >= 3");
  if (!std::isfinite(center)) throw InvalidParameter("pulse center must be finite");
}

double GaussianPulse::value(double t) const {
  const double x = (t - center) / width;
  return peak * std::exp(-x * x);
}

double GaussianPulse::exact_area(double t) const {
  check_window(t, t_start(), t_end());
  return 0.5 * peak * width * kSqrtPi * (std::erf((t - center) / width) + std::erf(cutoff));
}

PulseShape gaussian_shape(double cutoff) {
  if (!(cutoff >= 3.0)) throw InvalidParameter("pulse cutoff factor c must be >= 3");
  return {"gaussian", [cutoff](double tau) { return std::exp(-(cutoff * tau) * (cutoff * tau)); },
          cutoff};
}

double BasePulse::value(double t) const { return shape.profile(normalized_time(*this, t)); }

BasePulse to_base_pulse(const GaussianPulse& pulse) {
  pulse.validate();
  return {gaussian_shape(pulse.cutoff), pulse.t_start(), pulse.t_end()};
}

double cumulative_area(const GaussianPulse& pulse, double t) {
  pulse.validate();
  check_window(t, pulse.t_start(), pulse.t_end());
  const double span = t - pulse.t_start();
  if (span <= 0.0) return 0.0;
  // h <= T/512 keeps the Simpson error below 1e-11 * peak * T.
  const long panels = 2 * static_cast<long>(std::ceil(256.0 * span / pulse.width)) + 2;
  return simpson_panels([&](double u) { return pulse.value(u); }, pulse.t_start(), t, panels);
}

double cumulative_area(const BasePulse& pulse, double amplitude, double t) {
  check_window(t, pulse.t_start, pulse.t_end);
  const double span = t - pulse.t_start;
  if (span <= 0.0) return 0.0;
  const long panels = 2 * static_cast<long>(std::ceil(2048.0 * span / (pulse.t_end - pulse.t_start))) + 2;
  return amplitude * simpson_panels([&](double u) { return pulse.value(u); }, pulse.t_start, t, panels);
}

RatioResult ratio_from_rho(int n_atoms, double epsilon, double area) {
  require_atom_count(n_atoms);
  const double s = std::sqrt(static_cast<double>(n_atoms - 1));
  const double x = epsilon * area;
  if (x < 0.0) throw DomainError("epsilon * area must be nonnegative");
  if (x >= s) return {0.0, true};
  return {(1.0 - x / s) / std::sqrt(1.0 + x * (2.0 * s - x)), false};
}

PulseSchedule PulseSchedule::from_samples(int n_atoms, double epsilon, std::vector<double> grid,
                                          std::vector<double> omega, std::vector<double> omega_prime) {
  require_atom_count(n_atoms);
  if (grid.size() < 3 || omega.size() != grid.size() || omega_prime.size() != grid.size())
    throw InvalidArgument("schedule needs >= 3 samples with matching lengths");
  for (std::size_t k = 1; k < grid.size(); ++k)
    if (!(grid[k] > grid[k - 1])) throw InvalidArgument("schedule grid must be strictly increasing");
  for (std::size_t k = 0; k < grid.size(); ++k)
    if (!(omega[k] >= 0.0) || !(omega_prime[k] >= 0.0))
      throw InvalidArgument("schedule amplitudes must be nonnegative");

  PulseSchedule s;
  s.n_atoms = n_atoms;
  s.epsilon = epsilon;
  s.grid = std::move(grid);
  s.omega = std::move(omega);
  s.omega_prime = std::move(omega_prime);
  s.area.assign(s.grid.size(), 0.0);
  const bool uniform = is_uniform(s.grid);
  const std::size_t n = s.grid.size();
  for (std::size_t k = 1; k < n; ++k) {
    const double h = s.grid[k] - s.grid[k - 1];
    double piece = 0.5 * h * (s.omega[k - 1] + s.omega[k]);
    if (uniform) {
      // Integral of the quadratic through three neighbouring samples over one interval.
      if (k + 1 < n)
        piece = h / 12.0 * (5.0 * s.omega[k - 1] + 8.0 * s.omega[k] - s.omega[k + 1]);
      else
        piece = h / 12.0 * (-s.omega[k - 2] + 8.0 * s.omega[k - 1] + 5.0 * s.omega[k]);
    }
    s.area[k] = s.area[k - 1] + piece;
  }
  s.peak = *std::max_element(s.omega.begin(), s.omega.end());
  return s;
}

double PulseSchedule::omega_prime_area() const {
  if (is_uniform(grid)) return simpson(omega_prime, duration() / static_cast<double>(grid.size() - 1));
  double sum = 0.0;
  for (std::size_t k = 1; k < grid.size(); ++k)
    sum += 0.5 * (grid[k] - grid[k - 1]) * (omega_prime[k] + omega_prime[k - 1]);
  return sum;
}

std::vector<double> PulseSchedule::theta() const {
  std::vector<double> out(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k)
    out[k] = (omega[k] == 0.0 && omega_prime[k] == 0.0)
                 ? std::numeric_limits<double>::quiet_NaN()
                 : mixing_angle(n_atoms, omega[k], omega_prime[k]);
  return out;
}

ScheduleSample PulseSchedule::at(double t) const {
  check_window(t, t_start(), t_end());
  auto it = std::upper_bound(grid.begin(), grid.end(), t);
  std::size_t k = (it == grid.begin()) ? 0 : static_cast<std::size_t>(it - grid.begin()) - 1;
  k = std::min(k, grid.size() - 2);
  const double h = grid[k + 1] - grid[k];
  const double w = std::clamp((t - grid[k]) / h, 0.0, 1.0);
  ScheduleSample s;
  s.omega_dot = (omega[k + 1] - omega[k]) / h;
  s.omega_prime_dot = (omega_prime[k + 1] - omega_prime[k]) / h;
  s.omega = omega[k] + w * (omega[k + 1] - omega[k]);
  s.omega_prime = omega_prime[k] + w * (omega_prime[k + 1] - omega_prime[k]);
  return s;
}

void validate_design_inputs(int n_atoms, double epsilon, std::size_t n_samples) {
  require_atom_count(n_atoms);
  if (!(epsilon > 0.0 && epsilon <= 0.2))
    throw InvalidParameter("adiabaticity ratio epsilon must lie in (0, 0.2], got " + format_real(epsilon));
  if (n_samples < 100) throw InvalidParameter("schedule needs at least 100 samples");
}

double designed_gaussian_peak(int n_atoms, double epsilon, const GaussianPulse& pulse) {
  pulse.validate();
  return std::sqrt(static_cast<double>(n_atoms - 1)) /
         (epsilon * kSqrtPi * std::erf(pulse.cutoff) * pulse.width);
}

PulseSchedule design_schedule(int n_atoms, double epsilon, const GaussianPulse& pulse,
                              std::size_t n_samples) {
  validate_design_inputs(n_atoms, epsilon, n_samples);
  const double amplitude = designed_gaussian_peak(n_atoms, epsilon, pulse);
  auto s = sample_design(n_atoms, epsilon, to_base_pulse(pulse), amplitude, n_samples);
  s.width = pulse.width;
  return s;
}

PulseSchedule design_schedule(int n_atoms, double epsilon, const BasePulse& pulse,
                              std::size_t n_samples) {
  validate_design_inputs(n_atoms, epsilon, n_samples);
  if (!(pulse.t_end > pulse.t_start)) throw InvalidParameter("pulse window must have positive length");
  const double unit_area = cumulative_area(pulse, 1.0, pulse.t_end);
  if (!(unit_area > 0.0)) throw InvalidParameter("base pulse has no area");
  const double target = std::sqrt(static_cast<double>(n_atoms - 1)) / epsilon;
  auto s = sample_design(n_atoms, epsilon, pulse, target / unit_area, n_samples);
  if (pulse.shape.cutoff > 0.0) s.width = (pulse.t_end - pulse.t_start) / (2.0 * pulse.shape.cutoff);
  return s;
}

AdiabaticityReport verify_adiabaticity(const PulseSchedule& schedule, const SystemParams<double>& params) {
  if (params.n_atoms != schedule.n_atoms)
    throw InvalidArgument("schedule and system disagree on the atom count");
  const auto theta = schedule.theta();
  const auto& t = schedule.grid;
  AdiabaticityReport report{schedule.epsilon, 0.0, t.front()};
  for (std::size_t k = 1; k + 1 < t.size(); ++k) {
    const double lambda = adiabatic_gap(schedule.n_atoms, schedule.omega[k], schedule.omega_prime[k]);
    if (!(lambda > 0.0) || std::isnan(theta[k - 1]) || std::isnan(theta[k + 1])) continue;
    const double h1 = t[k] - t[k - 1];
    const double h2 = t[k + 1] - t[k];
    const double theta_dot =
        (h1 * h1 * (theta[k + 1] - theta[k]) + h2 * h2 * (theta[k] - theta[k - 1])) / (h1 * h2 * (h1 + h2));
    const double dev = std::abs(theta_dot / lambda - schedule.epsilon);
    if (dev > report.max_deviation) {
      report.max_deviation = dev;
      report.worst_time = t[k];
    }
  }
  return report;
}

void write_schedule(std::ostream& os, const PulseSchedule& s, const std::vector<std::string>& header) {
  os << "# cavgrover schedule\n";
  os << "# N = " << s.n_atoms << '\n';
  os << "# epsilon = " << format_real(s.epsilon) << '\n';
  os << "# pulse = " << s.pulse_name << '\n';
  os << "# omega_peak = " << format_real(s.peak) << '\n';
  os << "# T = " << format_real(s.width) << '\n';
  os << "# c = " << format_real(s.cutoff) << '\n';
  for (const auto& line : header) os << "# " << line << '\n';
  os << "# t omega omega_prime area theta\n";
  const auto theta = s.theta();
  for (std::size_t k = 0; k < s.size(); ++k)
    os << format_real(s.grid[k]) << ' ' << format_real(s.omega[k]) << ' ' << format_real(s.omega_prime[k])
       << ' ' << format_real(s.area[k]) << ' ' << format_real(theta[k]) << '\n';
}

double simpson(const std::vector<double>& f, double h) {
  const std::size_t n = f.size();
  if (n < 2) return 0.0;
  if (n == 2) return 0.5 * h * (f[0] + f[1]);
  std::size_t intervals = n - 1;
  double tail = 0.0;
  if (intervals % 2) {
    // Odd interval count: close the last three intervals with the 3/8 rule.
    if (intervals == 1) return 0.5 * h * (f[0] + f[1]);
    const std::size_t j = n - 4;
    tail = 3.0 * h / 8.0 * (f[j] + 3.0 * f[j + 1] + 3.0 * f[j + 2] + f[j + 3]);
    intervals -= 3;
  }
  double sum = 0.0;
  for (std::size_t i = 0; i + 2 <= intervals; i += 2) sum += f[i] + 4.0 * f[i + 1] + f[i + 2];
  return h / 3.0 * sum + tail;
}

}  // namespace cavgrover
