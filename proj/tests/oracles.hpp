#pragma once

// Reference computations written independently of the library code they check.

#include <cmath>
#include <complex>
#include <random>

#include <Eigen/Dense>

namespace oracle {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;

/// Dark-state overlap under the constant-ratio design, as a function of the
/// stretched time s = integral of Lambda. In that variable the adiabatic-frame
/// Hamiltonian is constant with eigenvalues {0, +-sqrt(1+eps^2)}, and the
/// zero-mode carries weight 1/(1+eps^2) of the initial dark state.
inline double dark_overlap(double epsilon, double s) {
  const double e2 = epsilon * epsilon;
  const double amp = (1.0 + e2 * std::cos(std::sqrt(1.0 + e2) * s)) / (1.0 + e2);
  return amp * amp;
}

/// Final marked population: s runs from 0 to arctan(sqrt(N-1))/eps.
inline double final_fidelity(int n_atoms, double epsilon) {
  return dark_overlap(epsilon, std::atan(std::sqrt(n_atoms - 1.0)) / epsilon);
}

/// Lowest value dark_overlap can reach.
inline double fidelity_floor(double epsilon) {
  const double e2 = epsilon * epsilon;
  return std::pow((1.0 - e2) / (1.0 + e2), 2);
}

/// Random (N-1)x(N-1) unitary whose column `col` is the uniform vector, built
/// from a Householder QR of a random matrix seeded with that column.
inline Mat random_mixing(int n_atoms, std::mt19937& rng, int col = 0) {
  const int m = n_atoms - 1;
  std::normal_distribution<double> g;
  Mat a(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) a(i, j) = cplx(g(rng), g(rng));
  a.col(0).setConstant(1.0 / std::sqrt(double(m)));
  Mat q = Eigen::HouseholderQR<Mat>(a).householderQ();
  // QR fixes the first column only up to a phase.
  const cplx phase = q(0, 0) / std::abs(q(0, 0));
  q.col(0) /= phase;
  q.col(0).swap(q.col(col));
  return q;
}

/// Full single-excitation Hamiltonian written straight from its definition:
/// laser couplings g'_j <-> e_j, cavity couplings e_j <-> (g,1).
/// Ordering: g'_1..g'_N, e_1..e_N, (g,1), and a trailing uncoupled slot.
inline Mat full_hamiltonian(int n, double g, double omega, double omega_prime, double delta, bool rwa,
                            double t) {
  Mat h = Mat::Zero(2 * n + 2, 2 * n + 2);
  const cplx rot = rwa ? cplx(0) : std::exp(cplx(0, -delta * t));
  for (int j = 0; j < n; ++j) {
    const bool marked = j == n - 1;
    const cplx c = marked ? omega_prime + std::conj(rot) * omega : omega + rot * omega_prime;
    h(j, n + j) += c;
    h(n + j, j) += std::conj(c);
    h(n + j, 2 * n) += g;
    h(2 * n, n + j) += g;
  }
  return h;
}

}  // namespace oracle
