#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <ostream>

#include <Eigen/Dense>

#include "cavgrover/basis.hpp"
#include "cavgrover/errors.hpp"
#include "cavgrover/state.hpp"
#include "cavgrover/text_format.hpp"

// All operators live in the rotating frame in which the cavity/laser carrier
// has been removed; only the marked-state shift delta survives, and only in
// the counter-rotating terms.

namespace cavgrover {

template <typename Real = double>
struct SystemParams {
  int n_atoms = 8;
  Real coupling_g = Real(1);  // cavity coupling G
  Real delta = Real(0);       // marked-state shift
  bool rwa = true;            // drop the terms oscillating at delta

  void validate() const {
    require_atom_count(n_atoms);
    if (!(coupling_g > Real(0))) throw InvalidParameter("cavity coupling G must be > 0");
    if (!(delta >= Real(0))) throw InvalidParameter("marked-state shift delta must be >= 0");
    if (!rwa && !(delta > Real(0)))
      throw InvalidParameter("counter-rotating terms require delta > 0");
  }
};

/// Dense Hermitian matrix tagged with the basis it acts on.
template <typename Real = double>
class HermitianOperator {
public:
  using Matrix = CMatrix<Real>;

  HermitianOperator(Level level, int n_atoms, Matrix entries)
      : level_(level), n_atoms_(n_atoms), entries_(std::move(entries)) {
    const auto dim = static_cast<Eigen::Index>(cavgrover::dimension(level, n_atoms));
    if (entries_.rows() != dim || entries_.cols() != dim)
      throw InvalidArgument("operator shape does not match level " + std::string(level_name(level)));
    const Real scale = entries_.cwiseAbs().maxCoeff();
    const Real defect = (entries_ - entries_.adjoint()).cwiseAbs().maxCoeff();
    if (defect > Real(1e-12) * scale) throw InvalidArgument("operator is not Hermitian");
  }

  Level level() const noexcept { return level_; }
  int n_atoms() const noexcept { return n_atoms_; }
  const Matrix& matrix() const noexcept { return entries_; }
  Eigen::Index dimension() const noexcept { return entries_.rows(); }

  std::complex<Real> operator()(const BasisLabel& row, const BasisLabel& col) const {
    return entries_(static_cast<Eigen::Index>(index_of(row, n_atoms_)),
                    static_cast<Eigen::Index>(index_of(col, n_atoms_)));
  }

  Eigen::Matrix<Real, Eigen::Dynamic, 1> eigenvalues() const {
    return Eigen::SelfAdjointEigenSolver<Matrix>(entries_, Eigen::EigenvaluesOnly).eigenvalues();
  }

private:
  Level level_;
  int n_atoms_;
  Matrix entries_;
};

/// Laser couplings Sigma = <g'_u|H|e_u>, Sigma' = <g'_N|H|e_N>.
template <typename Real>
struct LaserCouplings {
  std::complex<Real> sigma;
  std::complex<Real> sigma_prime;
};

namespace detail {

template <typename Real>
void require_amplitudes(Real omega, Real omega_prime) {
  if (!(omega >= Real(0)) || !(omega_prime >= Real(0)))
    throw InvalidArgument("pulse amplitudes must be nonnegative");
}

template <typename Real>
void fill_lower(CMatrix<Real>& h) {
  for (Eigen::Index r = 0; r < h.rows(); ++r)
    for (Eigen::Index c = r + 1; c < h.cols(); ++c) h(c, r) = std::conj(h(r, c));
}

}  // namespace detail

template <typename Real>
LaserCouplings<Real> laser_couplings(const SystemParams<Real>& params, Real omega, Real omega_prime,
                                     Real t) {
  detail::require_amplitudes(omega, omega_prime);
  if (params.rwa) return {omega, omega_prime};
  const auto phase = std::polar(Real(1), -params.delta * t);
  return {omega + phase * omega_prime, omega_prime + std::conj(phase) * omega};
}

/// Single-photon sector on g'_1..g'_N, e_1..e_N, (g,1).
template <typename Real>
HermitianOperator<Real> build_full(const SystemParams<Real>& params, Real omega, Real omega_prime,
                                   Real t) {
  params.validate();
  const auto [sigma, sigma_prime] = laser_couplings(params, omega, omega_prime, t);
  const Eigen::Index n = params.n_atoms;
  CMatrix<Real> h = CMatrix<Real>::Zero(2 * n + 2, 2 * n + 2);
  for (Eigen::Index j = 0; j < n; ++j) {
    h(j, n + j) = (j == n - 1) ? sigma_prime : sigma;
    h(n + j, 2 * n) = params.coupling_g;
  }
  detail::fill_lower(h);
  return {Level::Full, params.n_atoms, std::move(h)};
}

/// Five-level collective Hamiltonian on g'_u, g'_N, (g,1), e_u, e_N.
template <typename Real>
HermitianOperator<Real> build_h1(const SystemParams<Real>& params, Real omega, Real omega_prime,
                                 Real t) {
  params.validate();
  const auto [sigma, sigma_prime] = laser_couplings(params, omega, omega_prime, t);
  const Real root_unmarked = std::sqrt(static_cast<Real>(params.n_atoms - 1));
  CMatrix<Real> h = CMatrix<Real>::Zero(5, 5);
  h(0, 3) = sigma;
  h(1, 4) = sigma_prime;
  h(2, 3) = root_unmarked * params.coupling_g;
  h(2, 4) = params.coupling_g;
  detail::fill_lower(h);
  return {Level::Collective5, params.n_atoms, std::move(h)};
}

/// Dressed cavity states on the ordered basis {(g,1), e_u, e_N}.
template <typename Real = double>
struct CavityEigensystem {
  Real gamma0;
  Real gamma_plus;
  Real gamma_minus;
  Eigen::Matrix<Real, 3, 1> vec0;
  Eigen::Matrix<Real, 3, 1> vec_plus;
  Eigen::Matrix<Real, 3, 1> vec_minus;
};

template <typename Real>
CavityEigensystem<Real> cavity_eigensystem(const SystemParams<Real>& params) {
  params.validate();
  const Real n = static_cast<Real>(params.n_atoms);
  const Real marked = Real(1) / std::sqrt(n);
  const Real unmarked = std::sqrt(Real(1) - Real(1) / n);
  const Real half = Real(1) / std::sqrt(Real(2));
  const Real gap = std::sqrt(n) * params.coupling_g;
  CavityEigensystem<Real> es;
  es.gamma0 = Real(0);
  es.gamma_plus = gap;
  es.gamma_minus = -gap;
  es.vec0 << Real(0), -marked, unmarked;
  es.vec_plus << half, half * unmarked, half * marked;
  es.vec_minus << -half, half * unmarked, half * marked;
  return es;
}

/// Unitary T on the collective basis: columns g'_u, g'_N, gamma0, gamma+, gamma-.
template <typename Real>
CMatrix<Real> cavity_transform(const SystemParams<Real>& params) {
  const auto es = cavity_eigensystem(params);
  CMatrix<Real> t = CMatrix<Real>::Zero(5, 5);
  t(0, 0) = Real(1);
  t(1, 1) = Real(1);
  t.block(2, 2, 3, 1) = es.vec0.template cast<std::complex<Real>>();
  t.block(2, 3, 3, 1) = es.vec_plus.template cast<std::complex<Real>>();
  t.block(2, 4, 3, 1) = es.vec_minus.template cast<std::complex<Real>>();
  return t;
}

/// Blocks of T^dagger H1 T. A acts on {g'_u, g'_N, gamma0}, C on {gamma+, gamma-},
/// B couples them.
template <typename Real = double>
struct EliminationBlocks {
  CMatrix<Real> a;
  CMatrix<Real> b;
  CMatrix<Real> c;

  CMatrix<Real> assembled() const {
    CMatrix<Real> h(5, 5);
    h << a, b, b.adjoint(), c;
    return h;
  }
};

template <typename Real>
EliminationBlocks<Real> build_blocks(const SystemParams<Real>& params, Real omega, Real omega_prime,
                                     Real t) {
  params.validate();
  const auto [sigma, sigma_prime] = laser_couplings(params, omega, omega_prime, t);
  const Real n = static_cast<Real>(params.n_atoms);
  const Real root_n = std::sqrt(n);
  const Real root_unmarked = std::sqrt(n - Real(1));
  EliminationBlocks<Real> blocks;
  blocks.a = CMatrix<Real>::Zero(3, 3);
  blocks.a(0, 2) = -sigma / root_n;
  blocks.a(1, 2) = root_unmarked * sigma_prime / root_n;
  detail::fill_lower(blocks.a);
  const Real scale = Real(1) / std::sqrt(Real(2) * n);
  blocks.b = CMatrix<Real>::Zero(3, 2);
  blocks.b.row(0).setConstant(scale * root_unmarked * sigma);
  blocks.b.row(1).setConstant(scale * sigma_prime);
  blocks.c = CMatrix<Real>::Zero(2, 2);
  blocks.c(0, 0) = root_n * params.coupling_g;
  blocks.c(1, 1) = -root_n * params.coupling_g;
  return blocks;
}

/// Second-order correction B C^{-1} B^dagger from eliminating the dressed cavity branch.
template <typename Real>
CMatrix<Real> elimination_correction(const EliminationBlocks<Real>& blocks) {
  return blocks.b * blocks.c.inverse() * blocks.b.adjoint();
}

/// Effective three-level Hamiltonian on {g'_N, gamma0, g'_u} (resonant approximation).
template <typename Real>
HermitianOperator<Real> build_heff(const SystemParams<Real>& params, Real omega, Real omega_prime) {
  params.validate();
  detail::require_amplitudes(omega, omega_prime);
  const Real n = static_cast<Real>(params.n_atoms);
  const Real root_n = std::sqrt(n);
  CMatrix<Real> h = CMatrix<Real>::Zero(3, 3);
  h(0, 1) = std::sqrt(n - Real(1)) * omega_prime / root_n;
  h(1, 2) = -omega / root_n;
  detail::fill_lower(h);
  return {Level::Effective3, params.n_atoms, std::move(h)};
}

/// Instantaneous eigensystem of the effective Hamiltonian.
///
/// Vectors are written on {g'_N, gamma0, g'_u}:
///   |0>  = cos(theta)|g'_N> - sin(theta)|g'_u>               eigenvalue 0
///   |+-> = (sin(theta)|g'_N> + cos(theta)|g'_u> -+ |gamma0>)/sqrt2   eigenvalue +-Lambda
template <typename Real = double>
struct AdiabaticFrame {
  Real theta;
  Real theta_dot;
  Real lambda;
  Eigen::Matrix<Real, 3, 1> zero;
  Eigen::Matrix<Real, 3, 1> plus;
  Eigen::Matrix<Real, 3, 1> minus;

  /// Columns |+>, |0>, |-> (the adiabatic-basis order).
  CMatrix<Real> basis() const {
    CMatrix<Real> u(3, 3);
    u.col(0) = plus.template cast<std::complex<Real>>();
    u.col(1) = zero.template cast<std::complex<Real>>();
    u.col(2) = minus.template cast<std::complex<Real>>();
    return u;
  }
};

template <typename Real>
Real adiabatic_gap(int n_atoms, Real omega, Real omega_prime) {
  const Real n = static_cast<Real>(n_atoms);
  return std::sqrt((n - Real(1)) * omega_prime * omega_prime + omega * omega) / std::sqrt(n);
}

/// Mixing angle with tan(theta) = -sqrt(N-1) Omega'/Omega, theta in [-pi/2, 0].
template <typename Real>
Real mixing_angle(int n_atoms, Real omega, Real omega_prime) {
  if (omega == Real(0) && omega_prime == Real(0))
    throw UndefinedAngle("mixing angle undefined with both pulses off");
  return std::atan2(-std::sqrt(static_cast<Real>(n_atoms - 1)) * omega_prime, omega);
}

template <typename Real>
AdiabaticFrame<Real> adiabatic_frame(const SystemParams<Real>& params, Real omega, Real omega_prime,
                                     Real omega_dot, Real omega_prime_dot) {
  params.validate();
  detail::require_amplitudes(omega, omega_prime);
  const Real root_unmarked = std::sqrt(static_cast<Real>(params.n_atoms - 1));
  AdiabaticFrame<Real> f;
  f.theta = mixing_angle(params.n_atoms, omega, omega_prime);
  f.lambda = adiabatic_gap(params.n_atoms, omega, omega_prime);
  // d/dt atan2(y, x) with y = -sqrt(N-1) Omega', x = Omega; equals the quotient
  // rule on tan(theta) wherever Omega > 0.
  const Real y = -root_unmarked * omega_prime;
  const Real y_dot = -root_unmarked * omega_prime_dot;
  f.theta_dot = (omega * y_dot - y * omega_dot) / (omega * omega + y * y);
  const Real c = std::cos(f.theta);
  const Real s = std::sin(f.theta);
  const Real half = Real(1) / std::sqrt(Real(2));
  f.zero << c, Real(0), -s;
  f.plus << half * s, -half, half * c;
  f.minus << half * s, half, half * c;
  return f;
}

/// Effective Hamiltonian in the instantaneous eigenbasis {+, 0, -}, including the
/// frame-rotation coupling i theta_dot/sqrt2.
template <typename Real>
HermitianOperator<Real> build_heff_adiabatic(const AdiabaticFrame<Real>& frame, int n_atoms) {
  const std::complex<Real> k(Real(0), frame.theta_dot / std::sqrt(Real(2)));
  CMatrix<Real> h = CMatrix<Real>::Zero(3, 3);
  h(0, 0) = frame.lambda;
  h(2, 2) = -frame.lambda;
  h(0, 1) = k;
  h(1, 2) = -k;
  detail::fill_lower(h);
  return {Level::Adiabatic3, n_atoms, std::move(h)};
}

/// Dense text format: a `# level <name> N <n> dim <d>` line, then one line per row
/// holding `re im` pairs for every column.
template <typename Real>
void write_operator(std::ostream& os, const HermitianOperator<Real>& op) {
  os << "# level " << level_name(op.level()) << " N " << op.n_atoms() << " dim " << op.dimension()
     << '\n';
  for (Eigen::Index r = 0; r < op.dimension(); ++r) {
    for (Eigen::Index c = 0; c < op.dimension(); ++c) {
      const auto z = op.matrix()(r, c);
      os << (c ? "  " : "") << format_real(z.real()) << ' ' << format_real(z.imag());
    }
    os << '\n';
  }
}

}  // namespace cavgrover
