#pragma once

#include <Eigen/Dense>
#include <complex>
#include <span>
#include <vector>

#include "spinergo/errors.hpp"
#include "spinergo/operators.hpp"
#include "spinergo/qubit.hpp"

namespace spinergo {

/// Trace-one positive semidefinite Hermitian matrix on n qubits.
class DensityMatrix {
 public:
  /// Validates Hermiticity (1e-12), unit trace (1e-10) and positivity (-1e-10).
  explicit DensityMatrix(Eigen::MatrixXcd matrix);

  /// Skips validation; for matrices that are physical by construction.
  static DensityMatrix trusted(Eigen::MatrixXcd matrix);

  const Eigen::MatrixXcd& matrix() const noexcept { return matrix_; }
  Eigen::Index dim() const noexcept { return matrix_.rows(); }
  int n_sites() const noexcept { return n_sites_; }

 private:
  struct Unchecked {};
  DensityMatrix(Eigen::MatrixXcd matrix, Unchecked);

  Eigen::MatrixXcd matrix_;
  int n_sites_ = 0;
};

/// Two-site reduced state with its Pauli decomposition.
struct TwoSiteState {
  Eigen::Matrix4cd rho12;
  Eigen::Vector3d m_a;   // magnetization vector of the first site
  Eigen::Vector3d m_b;
  Eigen::Matrix3d corr;  // corr(i, j) = tr[(sigma_i (x) sigma_j) rho12]

  double mz_a() const { return m_a.z(); }
  double mz_b() const { return m_b.z(); }

  /// Rebuilds rho12 from (m_a, m_b, corr).
  Eigen::Matrix4cd reconstruct() const;
};

/// Boltzmann weights exp(-beta (E - E0)) / Z for ascending energies.
Eigen::VectorXd boltzmann_weights(const Eigen::VectorXd& energies, double beta);

/// Canonical state exp(-beta H)/Z built in the eigenbasis.
template <typename Scalar>
DensityMatrix gibbs_state(const SpectralHamiltonian<Scalar>& spectrum, double beta) {
  if (!(beta >= 0.0) || !std::isfinite(beta))
    throw InvalidArgument("inverse temperature must be finite and non-negative");
  const Eigen::VectorXd w = boltzmann_weights(spectrum.eigenvalues(), beta);
  const Eigen::MatrixXcd v = spectrum.eigenvectors().template cast<std::complex<double>>();
  Eigen::MatrixXcd rho = v * w.asDiagonal() * v.adjoint();
  rho = 0.5 * (rho + rho.adjoint()).eval();
  return DensityMatrix::trusted(std::move(rho));
}

/// U rho0 U^dagger with U = exp(-i H t), applied as phases in the eigenbasis.
template <typename Scalar>
DensityMatrix evolve(const SpectralHamiltonian<Scalar>& final_spectrum, const DensityMatrix& rho0,
                     double t) {
  if (rho0.dim() != final_spectrum.dim())
    throw InvalidArgument("state and Hamiltonian dimensions differ");
  if (!std::isfinite(t) || t < 0.0) throw InvalidArgument("evolution time must be finite and >= 0");
  const Eigen::MatrixXcd v = final_spectrum.eigenvectors().template cast<std::complex<double>>();
  const Eigen::VectorXd& e = final_spectrum.eigenvalues();
  const Eigen::VectorXcd phase =
      (e * std::complex<double>(0.0, -t)).unaryExpr([](std::complex<double> z) { return std::exp(z); });
  Eigen::MatrixXcd rho = v.adjoint() * rho0.matrix() * v;
  rho = phase.asDiagonal() * rho * phase.conjugate().asDiagonal();
  rho = v * rho * v.adjoint();
  rho = 0.5 * (rho + rho.adjoint()).eval();
  return DensityMatrix::trusted(std::move(rho));
}

/// Reduced state on one or two sites, kept in the order given. The first
/// kept site is the more significant qubit of the result.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> partial_trace(
    const Eigen::MatrixBase<Derived>& rho, int n_sites, std::span<const int> keep) {
  if (rho.rows() != (Eigen::Index{1} << n_sites) || rho.cols() != rho.rows())
    throw InvalidArgument("matrix size does not match the number of sites");
  if (keep.empty() || keep.size() > 2) throw InvalidArgument("partial_trace keeps one or two sites");
  for (std::size_t k = 0; k < keep.size(); ++k) {
    if (keep[k] < 0 || keep[k] >= n_sites) throw InvalidArgument("kept site out of range");
    for (std::size_t l = 0; l < k; ++l)
      if (keep[k] == keep[l]) throw InvalidArgument("kept sites must be distinct");
  }
  const int kept = static_cast<int>(keep.size());
  const Eigen::Index out_dim = Eigen::Index{1} << kept;
  std::vector<Eigen::Index> offset(static_cast<std::size_t>(out_dim), 0);
  Eigen::Index mask = 0;
  for (Eigen::Index r = 0; r < out_dim; ++r)
    for (int k = 0; k < kept; ++k)
      if ((r >> (kept - 1 - k)) & 1)
        offset[static_cast<std::size_t>(r)] |= Eigen::Index{1} << site_bit(n_sites, keep[k]);
  for (int k = 0; k < kept; ++k) mask |= Eigen::Index{1} << site_bit(n_sites, keep[k]);

  Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> out =
      Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>::Zero(out_dim, out_dim);
  for (Eigen::Index base = 0; base < rho.rows(); ++base) {
    if (base & mask) continue;
    for (Eigen::Index r = 0; r < out_dim; ++r)
      for (Eigen::Index c = 0; c < out_dim; ++c)
        out(r, c) += rho(base | offset[static_cast<std::size_t>(r)],
                         base | offset[static_cast<std::size_t>(c)]);
  }
  return out;
}

DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const int> keep);

TwoSiteState two_site_state(const Eigen::Matrix4cd& rho12);
TwoSiteState two_site_state(const DensityMatrix& rho, int site_a, int site_b);

/// Two-site reduced state of the pure state psi on (site_a, site_b).
template <typename Derived>
Eigen::Matrix4cd pair_density(const Eigen::MatrixBase<Derived>& psi, int n_sites, int site_a,
                              int site_b) {
  const Eigen::Index ma = Eigen::Index{1} << site_bit(n_sites, site_a);
  const Eigen::Index mb = Eigen::Index{1} << site_bit(n_sites, site_b);
  const Eigen::Index off[4] = {0, mb, ma, ma | mb};
  Eigen::Matrix4cd out = Eigen::Matrix4cd::Zero();
  for (Eigen::Index base = 0; base < psi.size(); ++base) {
    if (base & (ma | mb)) continue;
    Eigen::Vector4cd g;
    for (int p = 0; p < 4; ++p) g(p) = psi(base | off[p]);
    out.noalias() += g * g.adjoint();
  }
  return out;
}

/// Two-site reduced states of the canonical ensemble of a fixed Hamiltonian,
/// precomputed per eigenstate so that any inverse temperature is cheap.
class ThermalPairStates {
 public:
  ThermalPairStates(const SpectralHamiltonian<double>& spectrum, int site_a, int site_b);

  Eigen::Matrix4cd at(double beta) const;

 private:
  Eigen::VectorXd energies_;
  Eigen::Matrix<double, Eigen::Dynamic, 16> pair_rdm_;  // row k: eigenstate k, column-major 4x4
};

/// Quenched evolution of a canonical initial state.
///
/// The initial state exp(-beta H_initial)/Z is held as a weighted set of
/// H_initial eigenstates, truncated once the discarded Boltzmann weight drops
/// below the tolerance. Each kept state is propagated exactly under
/// H_final through phases in the H_final eigenbasis. The final spectrum is
/// referenced, not copied, and must outlive this object.
class QuenchEvolution {
 public:
  QuenchEvolution(const SpectralHamiltonian<double>& initial, double beta,
                  const SpectralHamiltonian<double>& final_spectrum,
                  double weight_tolerance = 1e-12);

  std::size_t kept_states() const noexcept { return weights_.size(); }
  double discarded_weight() const noexcept { return discarded_; }

  /// Two-site reduced states rho12(t) for each requested time.
  std::vector<Eigen::Matrix4cd> pair_series(int site_a, int site_b,
                                            std::span<const double> times) const;

 private:
  const SpectralHamiltonian<double>& final_;
  int n_sites_;
  std::vector<double> weights_;
  double discarded_ = 0.0;
  std::vector<Eigen::MatrixXd> coefficients_;  // per final block: block dim x kept states
};

}  // namespace spinergo
