#pragma once

#include <cmath>
#include <complex>
#include <optional>
#include <ostream>
#include <vector>

#include <Eigen/Dense>

#include "cavgrover/basis.hpp"
#include "cavgrover/errors.hpp"
#include "cavgrover/text_format.hpp"

namespace cavgrover {

template <typename Real>
using CVector = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;

template <typename Real>
using CMatrix = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;

/// Pure state over the basis of one reduction level.
///
/// The amplitudes are not forced to unit norm: projections such as
/// full_to_collective can legitimately lose weight to a residual subspace.
template <typename Real = double>
class StateVector {
public:
  using Scalar = std::complex<Real>;
  using Vector = CVector<Real>;

  StateVector(Level level, int n_atoms, Vector amplitudes)
      : level_(level), n_atoms_(n_atoms), amplitudes_(std::move(amplitudes)) {
    const auto dim = cavgrover::dimension(level, n_atoms);
    if (static_cast<std::size_t>(amplitudes_.size()) != dim)
      throw InvalidArgument("state dimension " + std::to_string(amplitudes_.size()) +
                            " does not match level " + std::string(level_name(level)) + " (" +
                            std::to_string(dim) + ")");
  }

  static StateVector zero(Level level, int n_atoms) {
    return StateVector(level, n_atoms,
                       Vector::Zero(static_cast<Eigen::Index>(cavgrover::dimension(level, n_atoms))));
  }

  Level level() const noexcept { return level_; }
  int n_atoms() const noexcept { return n_atoms_; }
  Eigen::Index dimension() const noexcept { return amplitudes_.size(); }
  const Vector& amplitudes() const noexcept { return amplitudes_; }
  Real norm() const { return amplitudes_.norm(); }

  Scalar amplitude(const BasisLabel& label) const {
    check_level(label);
    return amplitudes_(static_cast<Eigen::Index>(index_of(label, n_atoms_)));
  }

  void set(const BasisLabel& label, Scalar value) {
    check_level(label);
    amplitudes_(static_cast<Eigen::Index>(index_of(label, n_atoms_))) = value;
  }

private:
  void check_level(const BasisLabel& label) const {
    if (label.level != level_)
      throw InvalidArgument("label of level " + std::string(level_name(label.level)) +
                            " used on a state of level " + std::string(level_name(level_)));
  }

  Level level_;
  int n_atoms_;
  Vector amplitudes_;
};

/// |w> = N^{-1/2} sum_j |g'_j,0> on the full single-photon sector.
template <typename Real = double>
StateVector<Real> uniform_superposition(int n_atoms) {
  require_atom_count(n_atoms);
  auto state = StateVector<Real>::zero(Level::Full, n_atoms);
  const Real amp = Real(1) / std::sqrt(static_cast<Real>(n_atoms));
  for (int j = 1; j <= n_atoms; ++j) state.set(BasisLabel::gprime(j), amp);
  return state;
}

/// |w> expressed at any reduction level. At the adiabatic level it is the dark
/// state |0(t_i)> of the designed schedule.
template <typename Real = double>
StateVector<Real> uniform_superposition(Level level, int n_atoms) {
  require_atom_count(n_atoms);
  const Real n = static_cast<Real>(n_atoms);
  const Real marked = Real(1) / std::sqrt(n);
  const Real unmarked = std::sqrt(Real(1) - Real(1) / n);
  auto state = StateVector<Real>::zero(level, n_atoms);
  switch (level) {
    case Level::Full: return uniform_superposition<Real>(n_atoms);
    case Level::Collective5:
    case Level::Effective3:
      state.set({level, Tag::GPrimeN, 0}, marked);
      state.set({level, Tag::GPrimeU, 0}, unmarked);
      break;
    case Level::Adiabatic3: state.set(BasisLabel::adiabatic(Tag::Zero), Real(1)); break;
  }
  return state;
}

/// |m> = |g'_N,0>. Not defined at the adiabatic level, whose basis moves with time.
template <typename Real = double>
StateVector<Real> marked_state(Level level, int n_atoms) {
  auto state = StateVector<Real>::zero(level, n_atoms);
  switch (level) {
    case Level::Full: state.set(BasisLabel::gprime(n_atoms), Real(1)); break;
    case Level::Collective5:
    case Level::Effective3: state.set({level, Tag::GPrimeN, 0}, Real(1)); break;
    case Level::Adiabatic3:
      throw InvalidArgument("the marked state has no fixed adiabatic-basis representation");
  }
  return state;
}

template <typename Real>
Real population(const StateVector<Real>& state, const BasisLabel& label) {
  return std::norm(state.amplitude(label));
}

/// Populations in basis order.
template <typename Real>
std::vector<Real> populations(const StateVector<Real>& state) {
  std::vector<Real> out(static_cast<std::size_t>(state.dimension()));
  for (Eigen::Index i = 0; i < state.dimension(); ++i)
    out[static_cast<std::size_t>(i)] = std::norm(state.amplitudes()(i));
  return out;
}

/// Real orthogonal (N-1)x(N-1) matrix whose first column is the normalized
/// all-ones vector, completed by Gram-Schmidt over the standard basis.
template <typename Real = double>
CMatrix<Real> default_mixing(int n_atoms) {
  require_atom_count(n_atoms);
  const Eigen::Index m = n_atoms - 1;
  using RMatrix = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;
  using RVector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;
  RMatrix q(m, m);
  q.col(0) = RVector::Constant(m, Real(1) / std::sqrt(static_cast<Real>(m)));
  Eigen::Index filled = 1;
  for (Eigen::Index k = 0; k < m && filled < m; ++k) {
    RVector v = RVector::Unit(m, k);
    for (int pass = 0; pass < 2; ++pass)  // re-orthogonalize once
      for (Eigen::Index c = 0; c < filled; ++c) v -= q.col(c).dot(v) * q.col(c);
    const Real len = v.norm();
    if (len < Real(1e-8)) continue;
    q.col(filled++) = v / len;
  }
  return q.template cast<std::complex<Real>>();
}

/// Index of the column of U whose entries all equal 1/sqrt(N-1), if any.
template <typename Real>
std::optional<Eigen::Index> uniform_column(const CMatrix<Real>& mixing, Real tol = Real(1e-12)) {
  const Eigen::Index m = mixing.rows();
  const Real target = Real(1) / std::sqrt(static_cast<Real>(m));
  for (Eigen::Index c = 0; c < mixing.cols(); ++c) {
    bool uniform = true;
    for (Eigen::Index r = 0; r < m && uniform; ++r)
      uniform = std::abs(mixing(r, c) - std::complex<Real>(target)) <= tol;
    if (uniform) return c;
  }
  return std::nullopt;
}

/// Validates U and returns its uniform column.
template <typename Real>
Eigen::Index check_mixing(const CMatrix<Real>& mixing, int n_atoms, Real tol = Real(1e-12)) {
  require_atom_count(n_atoms);
  const Eigen::Index m = n_atoms - 1;
  if (mixing.rows() != m || mixing.cols() != m)
    throw InvalidTransform("mixing matrix must be " + std::to_string(m) + "x" + std::to_string(m));
  const Real defect = (mixing.adjoint() * mixing - CMatrix<Real>::Identity(m, m)).cwiseAbs().maxCoeff();
  if (!(defect <= tol))
    throw InvalidTransform("mixing matrix is not unitary (defect " + format_real(defect) + ")");
  const auto col = uniform_column(mixing, tol);
  if (!col) throw InvalidTransform("mixing matrix has no column with all entries 1/sqrt(N-1)");
  return *col;
}

/// Unitary W acting on the full basis: identity on g'_N, e_N and (g,1), U on the
/// unmarked g' and e blocks. Column `uniform_column(U)` of each block is the
/// collective state |g'_u,0> (resp. |e_u,0>).
template <typename Real>
CMatrix<Real> collective_transform(const CMatrix<Real>& mixing, int n_atoms) {
  check_mixing(mixing, n_atoms);
  const Eigen::Index n = n_atoms;
  const Eigen::Index m = n - 1;
  CMatrix<Real> w = CMatrix<Real>::Zero(2 * n + 2, 2 * n + 2);
  w.block(0, 0, m, m) = mixing;
  w.block(n, n, m, m) = mixing;
  w(n - 1, n - 1) = Real(1);
  w(2 * n - 1, 2 * n - 1) = Real(1);
  w(2 * n, 2 * n) = Real(1);
  w(2 * n + 1, 2 * n + 1) = Real(1);
  return w;
}

/// (2N+2)x5 isometry whose columns are |g'_u,0>, |g'_N,0>, |g,1>, |e_u,0>, |e_N,0>
/// written in the full basis.
template <typename Real>
CMatrix<Real> collective_embedding(const CMatrix<Real>& mixing, int n_atoms) {
  const auto w = collective_transform(mixing, n_atoms);
  const Eigen::Index u = check_mixing(mixing, n_atoms);
  const Eigen::Index n = n_atoms;
  CMatrix<Real> e(2 * n + 2, 5);
  e.col(0) = w.col(u);
  e.col(1) = w.col(n - 1);
  e.col(2) = w.col(2 * n);
  e.col(3) = w.col(n + u);
  e.col(4) = w.col(2 * n - 1);
  return e;
}

template <typename Real>
struct CollectiveProjection {
  StateVector<Real> state;  // Collective5 amplitudes
  Real residual;            // norm outside the coupled five-dimensional subspace
};

template <typename Real>
CollectiveProjection<Real> full_to_collective(const StateVector<Real>& state, const CMatrix<Real>& mixing) {
  if (state.level() != Level::Full) throw InvalidArgument("full_to_collective expects a full-level state");
  const int n_atoms = state.n_atoms();
  const auto embedding = collective_embedding(mixing, n_atoms);
  CVector<Real> coll = embedding.adjoint() * state.amplitudes();
  const Real residual = (state.amplitudes() - embedding * coll).norm();
  return {StateVector<Real>(Level::Collective5, n_atoms, std::move(coll)), residual};
}

template <typename Real>
CollectiveProjection<Real> full_to_collective(const StateVector<Real>& state) {
  return full_to_collective(state, default_mixing<Real>(state.n_atoms()));
}

/// Text format, one line per basis state: index, label, real part, imaginary part.
/// Preceded by a `# level <name> N <n> dim <d>` comment line.
template <typename Real>
void write_state(std::ostream& os, const StateVector<Real>& state) {
  os << "# level " << level_name(state.level()) << " N " << state.n_atoms() << " dim "
     << state.dimension() << '\n';
  os << "# index label re im\n";
  for (Eigen::Index i = 0; i < state.dimension(); ++i) {
    const auto label = label_at(state.level(), static_cast<std::size_t>(i), state.n_atoms());
    const auto a = state.amplitudes()(i);
    os << i << ' ' << label_name(label) << ' ' << format_real(a.real()) << ' ' << format_real(a.imag())
       << '\n';
  }
}

}  // namespace cavgrover
