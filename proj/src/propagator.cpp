#include "cavgrover/propagator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "cavgrover/text_format.hpp"

namespace cavgrover {

namespace {

using Vec = CVector<double>;
using Mat = CMatrix<double>;

constexpr std::complex<double> kMinusI{0.0, -1.0};

class ExponentialMidpoint {
public:
  void step(const HamiltonianFn& h, double t, double dt, Vec& psi) {
    solver_.compute(h(t + 0.5 * dt));
    const auto& v = solver_.eigenvectors();
    Vec coeffs = v.adjoint() * psi;
    for (Eigen::Index i = 0; i < coeffs.size(); ++i)
      coeffs(i) *= std::polar(1.0, -solver_.eigenvalues()(i) * dt);
    psi.noalias() = v * coeffs;
  }

private:
  Eigen::SelfAdjointEigenSolver<Mat> solver_;
};

void rk4_step(const HamiltonianFn& h, double t, double dt, Vec& psi) {
  const Mat h0 = h(t);
  const Mat hm = h(t + 0.5 * dt);
  const Mat h1 = h(t + dt);
  const Vec k1 = kMinusI * (h0 * psi);
  const Vec k2 = kMinusI * (hm * (psi + 0.5 * dt * k1));
  const Vec k3 = kMinusI * (hm * (psi + 0.5 * dt * k2));
  const Vec k4 = kMinusI * (h1 * (psi + dt * k3));
  psi += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

std::vector<double> abs2(const Vec& psi) {
  std::vector<double> p(static_cast<std::size_t>(psi.size()));
  for (Eigen::Index i = 0; i < psi.size(); ++i) p[static_cast<std::size_t>(i)] = std::norm(psi(i));
  return p;
}

AdiabaticPopulations project_adiabatic(const SystemParams<double>& params, const ScheduleSample& s,
                                       const Vec& psi) {
  if (s.omega == 0.0 && s.omega_prime == 0.0) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    return {nan, nan, nan};
  }
  const auto frame = adiabatic_frame(params, s.omega, s.omega_prime, s.omega_dot, s.omega_prime_dot);
  const Vec overlaps = frame.basis().adjoint() * psi;
  return {std::norm(overlaps(0)), std::norm(overlaps(1)), std::norm(overlaps(2))};
}

}  // namespace

std::vector<double> Trajectory::population_series(const BasisLabel& label) const {
  const auto i = index_of(label, n_atoms);
  std::vector<double> out;
  out.reserve(populations.size());
  for (const auto& row : populations) out.push_back(row[i]);
  return out;
}

double Trajectory::final_population(const BasisLabel& label) const {
  return populations.back()[index_of(label, n_atoms)];
}

HamiltonianFn make_hamiltonian(Level level, const SystemParams<double>& params, const PulseSchedule& schedule) {
  params.validate();
  if (params.n_atoms != schedule.n_atoms)
    throw InvalidArgument("schedule and system disagree on the atom count");
  switch (level) {
    case Level::Full:
      return [params, &schedule](double t) {
        const auto s = schedule.at(t);
        return build_full(params, s.omega, s.omega_prime, t).matrix();
      };
    case Level::Collective5:
      return [params, &schedule](double t) {
        const auto s = schedule.at(t);
        return build_h1(params, s.omega, s.omega_prime, t).matrix();
      };
    case Level::Effective3:
      return [params, &schedule](double t) {
        const auto s = schedule.at(t);
        return build_heff(params, s.omega, s.omega_prime).matrix();
      };
    case Level::Adiabatic3:
      return [params, &schedule](double t) {
        const auto s = schedule.at(t);
        const auto frame = adiabatic_frame(params, s.omega, s.omega_prime, s.omega_dot, s.omega_prime_dot);
        return build_heff_adiabatic(frame, params.n_atoms).matrix();
      };
  }
  throw InvalidArgument("unknown level");
}

Trajectory propagate(const HamiltonianFn& hamiltonian, double t0, double t1, const StateVector<double>& psi0,
                     long steps, const PropagationOptions& options) {
  if (steps < 1) throw InvalidArgument("step count must be positive");
  if (!(t1 > t0)) throw InvalidArgument("propagation interval must have positive length");
  if (std::abs(psi0.norm() - 1.0) > 1e-9) throw InvalidArgument("initial state is not normalized");

  Trajectory traj;
  traj.level = psi0.level();
  traj.n_atoms = psi0.n_atoms();
  traj.steps = steps;
  traj.labels = basis_labels(psi0.level(), psi0.n_atoms());
  const long stride = options.record_every > 0 ? options.record_every : std::max(1L, (steps + 1999) / 2000);

  Vec psi = psi0.amplitudes();
  traj.peak_populations = abs2(psi);
  for (auto i : options.tracked_subspace)
    if (i >= traj.labels.size()) throw InvalidArgument("tracked basis index out of range");
  const auto tracked = [&] {
    double sum = 0.0;
    for (auto i : options.tracked_subspace) sum += std::norm(psi(static_cast<Eigen::Index>(i)));
    return sum;
  };
  traj.peak_tracked_population = tracked();
  const auto record = [&](double t) {
    traj.times.push_back(t);
    traj.states.emplace_back(traj.level, traj.n_atoms, psi);
    traj.populations.push_back(abs2(psi));
  };
  record(t0);

  const double dt = (t1 - t0) / static_cast<double>(steps);
  ExponentialMidpoint midpoint;
  for (long k = 0; k < steps; ++k) {
    const double t = t0 + dt * static_cast<double>(k);
    if (options.integrator == Integrator::ExponentialMidpoint)
      midpoint.step(hamiltonian, t, dt, psi);
    else
      rk4_step(hamiltonian, t, dt, psi);

    const double drift = std::abs(psi.norm() - 1.0);
    traj.norm_drift = std::max(traj.norm_drift, drift);
    if (options.integrator == Integrator::RungeKutta4 && !(drift <= options.rk4_norm_tolerance)) {
      // Local error scales as dt^5; aim an order of magnitude below the tolerance.
      const double factor = std::pow(10.0 * drift / options.rk4_norm_tolerance, 0.25);
      const long suggested = static_cast<long>(std::ceil(static_cast<double>(steps) * std::max(2.0, factor)));
      throw StepSizeFailure("RK4 norm drift " + format_real(drift) + " exceeds " +
                                format_real(options.rk4_norm_tolerance) + " at t = " + format_real(t + dt) +
                                "; retry with at least " + std::to_string(suggested) + " steps",
                            suggested);
    }
    for (Eigen::Index i = 0; i < psi.size(); ++i) {
      auto& peak = traj.peak_populations[static_cast<std::size_t>(i)];
      peak = std::max(peak, std::norm(psi(i)));
    }
    traj.peak_tracked_population = std::max(traj.peak_tracked_population, tracked());
    if ((k + 1) % stride == 0 || k + 1 == steps) record(k + 1 == steps ? t1 : t + dt);
  }
  return traj;
}

Trajectory propagate(Level level, const SystemParams<double>& params, const PulseSchedule& schedule,
                     const StateVector<double>& psi0, long steps, const PropagationOptions& options) {
  if (psi0.level() != level) throw InvalidArgument("initial state level does not match the propagation level");
  if (psi0.n_atoms() != params.n_atoms) throw InvalidArgument("initial state has the wrong atom count");
  const long minimum = recommended_steps(level, params, schedule, 10.0);
  if (steps < minimum)
    throw InvalidArgument("step count " + std::to_string(steps) + " below 10 steps per 1/Lambda_max (" +
                          std::to_string(minimum) + ")");
  auto traj = propagate(make_hamiltonian(level, params, schedule), schedule.t_start(), schedule.t_end(), psi0,
                        steps, options);
  if (level == Level::Effective3) traj.adiabatic = adiabatic_projections(traj, params, schedule);
  return traj;
}

double max_spectral_radius(Level level, const SystemParams<double>& params, const PulseSchedule& schedule) {
  const auto h = make_hamiltonian(level, params, schedule);
  const std::size_t n = schedule.size();
  const std::size_t probes = std::min<std::size_t>(n, 1000);
  Eigen::SelfAdjointEigenSolver<Mat> solver;
  double radius = 0.0;
  for (std::size_t i = 0; i < probes; ++i) {
    const std::size_t k = probes == 1 ? 0 : i * (n - 1) / (probes - 1);
    solver.compute(h(schedule.grid[k]), Eigen::EigenvaluesOnly);
    radius = std::max(radius, solver.eigenvalues().cwiseAbs().maxCoeff());
  }
  return radius;
}

long recommended_steps(Level level, const SystemParams<double>& params, const PulseSchedule& schedule,
                       double steps_per_period) {
  const double periods = max_spectral_radius(level, params, schedule) * schedule.duration();
  return std::max(10L, static_cast<long>(std::ceil(steps_per_period * periods)));
}

Trajectory propagate_converged(Level level, const SystemParams<double>& params, const PulseSchedule& schedule,
                               const StateVector<double>& psi0, double tolerance,
                               const PropagationOptions& options, int max_doublings) {
  long steps = recommended_steps(level, params, schedule);
  auto previous = propagate(level, params, schedule, psi0, steps, options);
  for (int i = 0; i < max_doublings; ++i) {
    steps *= 2;
    auto next = propagate(level, params, schedule, psi0, steps, options);
    double change = 0.0;
    for (std::size_t j = 0; j < next.populations.back().size(); ++j)
      change = std::max(change, std::abs(next.populations.back()[j] - previous.populations.back()[j]));
    previous = std::move(next);
    if (change < tolerance) break;
  }
  return previous;
}

std::vector<AdiabaticPopulations> adiabatic_projections(const Trajectory& trajectory,
                                                        const SystemParams<double>& params,
                                                        const PulseSchedule& schedule) {
  if (trajectory.level != Level::Effective3)
    throw InvalidArgument("adiabatic projections need an effective-level trajectory");
  std::vector<AdiabaticPopulations> out;
  out.reserve(trajectory.times.size());
  for (std::size_t i = 0; i < trajectory.times.size(); ++i)
    out.push_back(project_adiabatic(params, schedule.at(trajectory.times[i]), trajectory.states[i].amplitudes()));
  return out;
}

void write_trajectory(std::ostream& os, const Trajectory& traj, const PulseSchedule& schedule,
                      const std::vector<std::string>& header) {
  os << "# cavgrover trajectory\n";
  os << "# level = " << level_name(traj.level) << '\n';
  os << "# N = " << traj.n_atoms << '\n';
  os << "# steps = " << traj.steps << '\n';
  os << "# norm_drift = " << format_real(traj.norm_drift) << '\n';
  for (const auto& line : header) os << "# " << line << '\n';
  os << "# t omega omega_prime";
  for (const auto& l : traj.labels) os << " P[" << label_name(l) << ']';
  os << " norm";
  const bool adiabatic = !traj.adiabatic.empty();
  if (adiabatic) os << " P[+] P[0] P[-]";
  os << '\n';
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    const auto s = schedule.at(traj.times[i]);
    os << format_real(traj.times[i]) << ' ' << format_real(s.omega) << ' ' << format_real(s.omega_prime);
    for (double p : traj.populations[i]) os << ' ' << format_real(p);
    os << ' ' << format_real(traj.states[i].norm());
    if (adiabatic) {
      const auto& a = traj.adiabatic[i];
      os << ' ' << format_real(a.plus) << ' ' << format_real(a.zero) << ' ' << format_real(a.minus);
    }
    os << '\n';
  }
}

}  // namespace cavgrover
