#include "cavgrover/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <ostream>

#include "cavgrover/text_format.hpp"

namespace cavgrover {

namespace {

double max_abs_difference(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

ScalingRecord run_scaling_point(int n_atoms, double epsilon, const PulseShape& shape, const SweepOptions& opt) {
  const double target_area = std::sqrt(static_cast<double>(n_atoms - 1)) / epsilon;
  const double duration = target_area / opt.mean_amplitude;
  const BasePulse pulse{shape, -0.5 * duration, 0.5 * duration};
  const auto schedule = design_schedule(n_atoms, epsilon, pulse, opt.n_samples);

  SystemParams<double> params;
  params.n_atoms = n_atoms;
  const long steps = recommended_steps(Level::Effective3, params, schedule, opt.steps_per_period);
  const auto traj = propagate(Level::Effective3, params, schedule,
                              uniform_superposition<double>(Level::Effective3, n_atoms), steps);

  ScalingRecord r;
  r.n_atoms = n_atoms;
  r.epsilon = epsilon;
  r.duration = schedule.duration();
  r.mean_amplitude = schedule.mean_amplitude();
  r.area = schedule.total_area();
  r.normalized_area = epsilon * r.area / std::sqrt(static_cast<double>(n_atoms - 1));
  r.omega_prime_area = schedule.omega_prime_area();
  r.scaled_omega_prime_area = epsilon * r.omega_prime_area;
  r.fidelity = traj.final_population(BasisLabel::effective(Tag::GPrimeN));
  r.steps = steps;
  r.passed = r.fidelity >= 1.0 - epsilon * epsilon && std::abs(r.normalized_area - 1.0) <= 1e-6;
  return r;
}

}  // namespace

Figure3Result run_figure3(const Figure3Options& options) {
  Figure3Result res;
  res.params.n_atoms = options.n_atoms;
  const GaussianPulse pulse{1.0, options.width, 0.0, options.cutoff};
  res.schedule = design_schedule(options.n_atoms, options.epsilon, pulse, options.n_samples);
  const long steps = options.steps > 0 ? options.steps
                                       : recommended_steps(Level::Effective3, res.params, res.schedule);
  res.trajectory = propagate(Level::Effective3, res.params, res.schedule,
                             uniform_superposition<double>(Level::Effective3, options.n_atoms), steps);

  const auto marked = BasisLabel::effective(Tag::GPrimeN);
  const auto unmarked = BasisLabel::effective(Tag::GPrimeU);
  const auto p_marked = res.trajectory.population_series(marked);
  const auto p_unmarked = res.trajectory.population_series(unmarked);
  res.initial_marked = p_marked.front();
  res.initial_unmarked = p_unmarked.front();
  res.final_marked = p_marked.back();
  res.final_unmarked = p_unmarked.back();
  res.threshold = 1.0 - options.epsilon * options.epsilon;
  double running = p_marked.front();
  for (double p : p_marked) {
    running = std::max(running, p);
    res.marked_max_drop = std::max(res.marked_max_drop, running - p);
  }

  const double n = options.n_atoms;
  if (std::abs(res.initial_marked - 1.0 / n) > 1e-12) res.failures.push_back("initial P_N differs from 1/N");
  if (std::abs(res.initial_unmarked - (1.0 - 1.0 / n)) > 1e-12)
    res.failures.push_back("initial P_u differs from 1 - 1/N");
  if (!(res.final_marked >= res.threshold))
    res.failures.push_back("final P_N = " + format_real(res.final_marked) + " below 1 - epsilon^2 = " +
                           format_real(res.threshold));
  if (!(res.final_unmarked <= 1.0 - res.threshold))
    res.failures.push_back("final P_u = " + format_real(res.final_unmarked) + " above epsilon^2");
  if (res.schedule.omega_prime.front() != res.schedule.omega.front())
    res.failures.push_back("pulses not switched on together");
  if (res.schedule.omega_prime.back() != 0.0 || !(res.schedule.omega.back() > 0.0))
    res.failures.push_back("Omega' does not end before Omega");
  res.passed = res.failures.empty();
  return res;
}

ScalingFit fit_power_law(const std::vector<ScalingRecord>& records) {
  if (records.size() < 2) throw InvalidArgument("a power-law fit needs at least two records");
  const double m = static_cast<double>(records.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (const auto& r : records) {
    const double x = std::log(static_cast<double>(r.n_atoms - 1));
    const double y = std::log(r.duration);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  ScalingFit fit;
  const double denom = m * sxx - sx * sx;
  if (!(denom > 0.0)) throw InvalidArgument("a power-law fit needs at least two distinct atom counts");
  fit.slope = (m * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / m;
  double ss = 0.0;
  for (const auto& r : records) {
    const double e =
        std::log(r.duration) - (fit.intercept + fit.slope * std::log(static_cast<double>(r.n_atoms - 1)));
    ss += e * e;
  }
  fit.residual = std::sqrt(ss / m);
  return fit;
}

ScalingReport sweep_scaling(const std::vector<int>& n_list, double epsilon, const PulseShape& shape,
                            const SweepOptions& options) {
  if (n_list.size() < 2) throw InvalidParameter("scaling sweep needs at least two atom counts");
  for (int n : n_list) validate_design_inputs(n, epsilon, options.n_samples);
  const auto [lo, hi] = std::minmax_element(n_list.begin(), n_list.end());
  if (*hi < 16 * *lo) throw InvalidParameter("scaling sweep must span at least four octaves in N");
  if (!(options.mean_amplitude > 0.0)) throw InvalidParameter("mean amplitude must be > 0");

  ScalingReport report;
  report.epsilon = epsilon;
  report.pulse = shape.name;
  if (options.parallel) {
    std::vector<std::future<ScalingRecord>> jobs;
    jobs.reserve(n_list.size());
    for (int n : n_list)
      jobs.push_back(std::async(std::launch::async, run_scaling_point, n, epsilon, std::cref(shape),
                                std::cref(options)));
    for (auto& job : jobs) report.records.push_back(job.get());
  } else {
    for (int n : n_list) report.records.push_back(run_scaling_point(n, epsilon, shape, options));
  }

  report.fit = fit_power_law(report.records);
  for (const auto& r : report.records) {
    if (!(r.fidelity >= 1.0 - epsilon * epsilon))
      report.failures.push_back("N = " + std::to_string(r.n_atoms) + ": fidelity " + format_real(r.fidelity) +
                                " below 1 - epsilon^2");
    if (!(std::abs(r.normalized_area - 1.0) <= 1e-6))
      report.failures.push_back("N = " + std::to_string(r.n_atoms) + ": epsilon * area / sqrt(N-1) = " +
                                format_real(r.normalized_area));
  }
  if (!(std::abs(report.fit.slope - 0.5) <= 0.03))
    report.failures.push_back("duration slope " + format_real(report.fit.slope) + " outside 0.5 +- 0.03");
  report.passed = report.failures.empty();
  return report;
}

void write_scaling_table(std::ostream& os, const ScalingReport& report, const std::vector<std::string>& header) {
  os << "# cavgrover scaling sweep\n";
  os << "# epsilon = " << format_real(report.epsilon) << '\n';
  os << "# pulse = " << report.pulse << '\n';
  for (const auto& line : header) os << "# " << line << '\n';
  os << "# fit: log(duration) = intercept + slope * log(N-1)\n";
  os << "# slope = " << format_real(report.fit.slope) << '\n';
  os << "# intercept = " << format_real(report.fit.intercept) << '\n';
  os << "# residual = " << format_real(report.fit.residual) << '\n';
  os << "# N duration mean_amplitude_x_duration eps_area_over_sqrt_n_minus_1 fidelity eps_int_omega_prime passed\n";
  for (const auto& r : report.records)
    os << r.n_atoms << ' ' << format_real(r.duration) << ' ' << format_real(r.area) << ' '
       << format_real(r.normalized_area) << ' ' << format_real(r.fidelity) << ' '
       << format_real(r.scaled_omega_prime_area) << ' ' << (r.passed ? 1 : 0) << '\n';
}

nlohmann::json to_json(const ScalingReport& report) {
  nlohmann::json records = nlohmann::json::array();
  for (const auto& r : report.records)
    records.push_back({{"N", r.n_atoms},
                       {"duration", r.duration},
                       {"mean_amplitude", r.mean_amplitude},
                       {"mean_amplitude_x_duration", r.area},
                       {"eps_area_over_sqrt_n_minus_1", r.normalized_area},
                       {"fidelity", r.fidelity},
                       {"omega_prime_area", r.omega_prime_area},
                       {"eps_int_omega_prime", r.scaled_omega_prime_area},
                       {"steps", r.steps},
                       {"passed", r.passed}});
  return {{"epsilon", report.epsilon},
          {"pulse", report.pulse},
          {"records", records},
          {"fit", {{"slope", report.fit.slope}, {"intercept", report.fit.intercept}, {"residual", report.fit.residual}}},
          {"passed", report.passed},
          {"failures", report.failures}};
}

ModelComparison compare_models(const CompareOptions& opt) {
  const auto schedule = design_schedule(opt.n_atoms, opt.epsilon, opt.pulse, opt.n_samples);
  ModelComparison out;
  out.n_atoms = opt.n_atoms;
  out.epsilon = opt.epsilon;
  out.coupling_g = opt.coupling_g > 0.0 ? opt.coupling_g : 100.0 * schedule.peak / opt.n_atoms;
  out.delta = opt.delta > 0.0 ? opt.delta : 1e3 / schedule.duration();
  out.delta_duration = out.delta * schedule.duration();
  out.small_parameter = schedule.peak / (opt.n_atoms * out.coupling_g);

  SystemParams<double> rwa{opt.n_atoms, out.coupling_g, out.delta, true};
  SystemParams<double> counter{opt.n_atoms, out.coupling_g, out.delta, false};
  out.steps = opt.steps > 0 ? opt.steps
                            : recommended_steps(Level::Collective5, counter, schedule, opt.steps_per_period);

  PropagationOptions popt;
  popt.tracked_subspace = {2, 3, 4};  // (g,1), e_u, e_N
  const auto eff = propagate(Level::Effective3, rwa, schedule,
                             uniform_superposition<double>(Level::Effective3, opt.n_atoms), out.steps);
  const auto psi5 = uniform_superposition<double>(Level::Collective5, opt.n_atoms);
  const auto col = propagate(Level::Collective5, rwa, schedule, psi5, out.steps, popt);
  const auto cr = propagate(Level::Collective5, counter, schedule, psi5, out.steps, popt);

  // (a) effective vs collective on g'_N, g'_u and the dark cavity state gamma0.
  const auto es = cavity_eigensystem(rwa);
  for (std::size_t i = 0; i < col.times.size(); ++i) {
    const auto& a = col.states[i].amplitudes();
    const std::complex<double> gamma0 = es.vec0(0) * a(2) + es.vec0(1) * a(3) + es.vec0(2) * a(4);
    const std::vector<double> reduced{eff.populations[i][0], eff.populations[i][2], eff.populations[i][1]};
    const std::vector<double> exact{std::norm(a(1)), std::norm(a(0)), std::norm(gamma0)};
    out.effective_vs_collective = std::max(out.effective_vs_collective, max_abs_difference(reduced, exact));
  }
  // (b) resonant approximation.
  for (std::size_t i = 0; i < col.times.size(); ++i)
    out.rwa_population_deviation =
        std::max(out.rwa_population_deviation, max_abs_difference(col.populations[i], cr.populations[i]));
  const auto marked5 = BasisLabel::collective(Tag::GPrimeN);
  out.fidelity_effective = eff.final_population(BasisLabel::effective(Tag::GPrimeN));
  out.fidelity_collective = col.final_population(marked5);
  out.fidelity_counter_rotating = cr.final_population(marked5);
  out.rwa_fidelity_difference = std::abs(out.fidelity_collective - out.fidelity_counter_rotating);
  out.max_excited_population = col.peak_tracked_population;

  // (c) exact reduction of the full sector.
  if (opt.n_atoms <= opt.full_max_atoms) {
    const auto full = propagate(Level::Full, counter, schedule, uniform_superposition<double>(opt.n_atoms),
                                out.steps, PropagationOptions{});
    const auto mixing = default_mixing<double>(opt.n_atoms);
    for (std::size_t i = 0; i < full.times.size(); ++i) {
      const auto proj = full_to_collective(full.states[i], mixing);
      out.collective_vs_full =
          std::max(out.collective_vs_full, max_abs_difference(populations(proj.state), cr.populations[i]));
      out.full_residual = std::max(out.full_residual, proj.residual);
    }
  } else {
    out.collective_vs_full = std::numeric_limits<double>::quiet_NaN();
    out.full_residual = std::numeric_limits<double>::quiet_NaN();
  }
  return out;
}

void write_comparison(std::ostream& os, const ModelComparison& r, const std::vector<std::string>& header) {
  os << "# cavgrover model comparison\n";
  for (const auto& line : header) os << "# " << line << '\n';
  os << "# quantity value\n";
  const std::pair<const char*, double> rows[] = {
      {"N", r.n_atoms},
      {"epsilon", r.epsilon},
      {"G", r.coupling_g},
      {"delta", r.delta},
      {"delta_x_duration", r.delta_duration},
      {"omega_peak_over_NG", r.small_parameter},
      {"steps", static_cast<double>(r.steps)},
      {"effective_vs_collective", r.effective_vs_collective},
      {"rwa_population_deviation", r.rwa_population_deviation},
      {"rwa_fidelity_difference", r.rwa_fidelity_difference},
      {"collective_vs_full", r.collective_vs_full},
      {"full_residual", r.full_residual},
      {"fidelity_effective", r.fidelity_effective},
      {"fidelity_collective", r.fidelity_collective},
      {"fidelity_counter_rotating", r.fidelity_counter_rotating},
      {"max_excited_population", r.max_excited_population},
  };
  for (const auto& [name, value] : rows) os << name << ' ' << format_real(value) << '\n';
}

nlohmann::json to_json(const ModelComparison& r) {
  const auto num = [](double v) { return std::isnan(v) ? nlohmann::json(nullptr) : nlohmann::json(v); };
  return {{"N", r.n_atoms},
          {"epsilon", r.epsilon},
          {"G", r.coupling_g},
          {"delta", r.delta},
          {"delta_x_duration", r.delta_duration},
          {"omega_peak_over_NG", r.small_parameter},
          {"steps", r.steps},
          {"effective_vs_collective", r.effective_vs_collective},
          {"rwa_population_deviation", r.rwa_population_deviation},
          {"rwa_fidelity_difference", r.rwa_fidelity_difference},
          {"collective_vs_full", num(r.collective_vs_full)},
          {"full_residual", num(r.full_residual)},
          {"fidelity_effective", r.fidelity_effective},
          {"fidelity_collective", r.fidelity_collective},
          {"fidelity_counter_rotating", r.fidelity_counter_rotating},
          {"max_excited_population", r.max_excited_population}};
}

}  // namespace cavgrover
