#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "cavgrover/hamiltonians.hpp"
#include "cavgrover/pulse.hpp"
#include "cavgrover/state.hpp"

namespace cavgrover {

enum class Integrator {
  ExponentialMidpoint,  // exp(-i H(t + h/2) h) by Hermitian eigendecomposition; unitary
  RungeKutta4,
};

struct PropagationOptions {
  Integrator integrator = Integrator::ExponentialMidpoint;
  /// Store every k-th step; 0 picks a stride giving at most ~2000 stored samples.
  long record_every = 0;
  /// Tolerated norm drift for the explicit integrator before it reports failure.
  double rk4_norm_tolerance = 1e-9;
  /// Basis indices whose summed population is tracked at every step.
  std::vector<std::size_t> tracked_subspace;
};

/// Overlaps of the state with the instantaneous eigenstates of the effective Hamiltonian.
struct AdiabaticPopulations {
  double plus;
  double zero;
  double minus;
};

struct Trajectory {
  Level level = Level::Effective3;
  int n_atoms = 2;
  long steps = 0;
  std::vector<BasisLabel> labels;
  std::vector<double> times;
  std::vector<StateVector<double>> states;
  std::vector<std::vector<double>> populations;  // [sample][basis index]
  /// Filled for Effective3 runs driven by a schedule; NaN where both pulses are off.
  std::vector<AdiabaticPopulations> adiabatic;
  /// Largest population reached by each basis state over every integration step.
  std::vector<double> peak_populations;
  /// Peak over every step of the summed population of options.tracked_subspace.
  double peak_tracked_population = 0.0;
  double norm_drift = 0.0;  // max | ||psi|| - 1 | over every step

  const StateVector<double>& final_state() const { return states.back(); }
  std::vector<double> population_series(const BasisLabel& label) const;
  double final_population(const BasisLabel& label) const;
};

using HamiltonianFn = std::function<CMatrix<double>(double)>;

/// H(t) at one reduction level, with the schedule interpolated linearly between samples.
HamiltonianFn make_hamiltonian(Level level, const SystemParams<double>& params,
                               const PulseSchedule& schedule);

/// Integrates i d/dt psi = H(t) psi from t0 to t1 in `steps` equal steps.
Trajectory propagate(const HamiltonianFn& hamiltonian, double t0, double t1, const StateVector<double>& psi0,
                     long steps, const PropagationOptions& options = {});

/// Schedule-driven propagation over the schedule window.
Trajectory propagate(Level level, const SystemParams<double>& params, const PulseSchedule& schedule,
                     const StateVector<double>& psi0, long steps, const PropagationOptions& options = {});

/// Largest |eigenvalue| of H(t) over the schedule samples.
double max_spectral_radius(Level level, const SystemParams<double>& params, const PulseSchedule& schedule);

/// steps_per_period * Lambda_max * duration, rounded up.
long recommended_steps(Level level, const SystemParams<double>& params, const PulseSchedule& schedule,
                       double steps_per_period = 200.0);

/// Starts from recommended_steps and doubles until the final populations move by
/// less than `tolerance`.
Trajectory propagate_converged(Level level, const SystemParams<double>& params, const PulseSchedule& schedule,
                               const StateVector<double>& psi0, double tolerance = 1e-8,
                               const PropagationOptions& options = {}, int max_doublings = 6);

std::vector<AdiabaticPopulations> adiabatic_projections(const Trajectory& trajectory,
                                                        const SystemParams<double>& params,
                                                        const PulseSchedule& schedule);

/// Columns t, Omega, Omega', one population per basis state, norm (and P_+, P_0, P_-
/// for effective runs).
void write_trajectory(std::ostream& os, const Trajectory& trajectory, const PulseSchedule& schedule,
                      const std::vector<std::string>& header = {});

}  // namespace cavgrover
