#include "spinergo/dynamics.hpp"

#include <algorithm>
#include <bit>
#include <numeric>

namespace spinergo {

namespace {

int qubits_for(Eigen::Index dim) {
  if (dim <= 0 || !std::has_single_bit(static_cast<unsigned long long>(dim)))
    throw InvalidArgument("dimension is not a power of two");
  return std::countr_zero(static_cast<unsigned long long>(dim));
}

}  // namespace

DensityMatrix::DensityMatrix(Eigen::MatrixXcd matrix, Unchecked)
    : matrix_(std::move(matrix)), n_sites_(qubits_for(matrix_.rows())) {}

DensityMatrix DensityMatrix::trusted(Eigen::MatrixXcd matrix) {
  if (matrix.rows() != matrix.cols()) throw InvalidArgument("density matrix must be square");
  return DensityMatrix(std::move(matrix), Unchecked{});
}

DensityMatrix::DensityMatrix(Eigen::MatrixXcd matrix) : DensityMatrix(trusted(std::move(matrix))) {
  if ((matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff() > 1e-12)
    throw InvalidState("density matrix is not Hermitian");
  if (std::abs(matrix_.trace() - 1.0) > 1e-10) throw InvalidState("density matrix trace is not 1");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(matrix_, Eigen::EigenvaluesOnly);
  if (solver.eigenvalues().minCoeff() < -1e-10)
    throw InvalidState("density matrix has a negative eigenvalue");
}

Eigen::Matrix4cd TwoSiteState::reconstruct() const { return to_matrix({m_a, m_b, corr}); }

Eigen::VectorXd boltzmann_weights(const Eigen::VectorXd& energies, double beta) {
  const double e0 = energies.minCoeff();
  Eigen::VectorXd w = (-beta * (energies.array() - e0)).exp().matrix();
  return w / w.sum();
}

DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const int> keep) {
  return DensityMatrix::trusted(partial_trace(rho.matrix(), rho.n_sites(), keep));
}

TwoSiteState two_site_state(const Eigen::Matrix4cd& rho12) {
  const BlochForm f = bloch_form(rho12);
  return {rho12, f.a, f.b, f.t};
}

TwoSiteState two_site_state(const DensityMatrix& rho, int site_a, int site_b) {
  const int keep[2] = {site_a, site_b};
  const Eigen::MatrixXcd reduced = partial_trace(rho.matrix(), rho.n_sites(), keep);
  return two_site_state(Eigen::Matrix4cd(reduced));
}

ThermalPairStates::ThermalPairStates(const SpectralHamiltonian<double>& spectrum, int site_a,
                                     int site_b) {
  const Eigen::Index dim = spectrum.dim();
  const int n = qubits_for(dim);
  if (site_a == site_b || site_a < 0 || site_b < 0 || site_a >= n || site_b >= n)
    throw InvalidArgument("invalid site pair");
  const Eigen::Index ma = Eigen::Index{1} << site_bit(n, site_a);
  const Eigen::Index mb = Eigen::Index{1} << site_bit(n, site_b);
  const Eigen::Index off[4] = {0, mb, ma, ma | mb};

  energies_.resize(dim);
  pair_rdm_.resize(dim, 16);
  Eigen::VectorXd psi(dim);
  Eigen::Index row = 0;
  for (const auto& block : spectrum.blocks()) {
    for (Eigen::Index k = 0; k < block.energies.size(); ++k, ++row) {
      psi.setZero();
      for (std::size_t r = 0; r < block.states.size(); ++r)
        psi(block.states[r]) = block.vectors(static_cast<Eigen::Index>(r), k);
      Eigen::Matrix4d rdm = Eigen::Matrix4d::Zero();
      for (Eigen::Index base = 0; base < dim; ++base) {
        if (base & (ma | mb)) continue;
        Eigen::Vector4d g;
        for (int p = 0; p < 4; ++p) g(p) = psi(base | off[p]);
        rdm.noalias() += g * g.transpose();
      }
      energies_(row) = block.energies(k);
      pair_rdm_.row(row) = Eigen::Map<const Eigen::Matrix<double, 1, 16>>(rdm.data());
    }
  }
}

Eigen::Matrix4cd ThermalPairStates::at(double beta) const {
  if (!(beta >= 0.0) || !std::isfinite(beta))
    throw InvalidArgument("inverse temperature must be finite and non-negative");
  const Eigen::VectorXd w = boltzmann_weights(energies_, beta);
  const Eigen::Matrix<double, 1, 16> flat = w.transpose() * pair_rdm_;
  return Eigen::Map<const Eigen::Matrix4d>(flat.data()).cast<std::complex<double>>();
}

QuenchEvolution::QuenchEvolution(const SpectralHamiltonian<double>& initial, double beta,
                                 const SpectralHamiltonian<double>& final_spectrum,
                                 double weight_tolerance)
    : final_(final_spectrum), n_sites_(qubits_for(final_spectrum.dim())) {
  if (initial.dim() != final_spectrum.dim())
    throw InvalidArgument("initial and final Hamiltonians differ in dimension");
  if (!(beta >= 0.0) || !std::isfinite(beta))
    throw InvalidArgument("inverse temperature must be finite and non-negative");

  // Flatten the initial eigenpairs and rank them by Boltzmann weight.
  struct Entry {
    double energy;
    std::size_t block;
    Eigen::Index column;
  };
  std::vector<Entry> entries;
  for (std::size_t b = 0; b < initial.blocks().size(); ++b)
    for (Eigen::Index k = 0; k < initial.blocks()[b].energies.size(); ++k)
      entries.push_back({initial.blocks()[b].energies(k), b, k});
  std::stable_sort(entries.begin(), entries.end(),
                   [](const Entry& x, const Entry& y) { return x.energy < y.energy; });
  Eigen::VectorXd all(static_cast<Eigen::Index>(entries.size()));
  for (std::size_t k = 0; k < entries.size(); ++k) all(static_cast<Eigen::Index>(k)) = entries[k].energy;
  const Eigen::VectorXd w = boltzmann_weights(all, beta);

  // Keep the heaviest states until the remaining tail is below tolerance.
  // Degenerate partners of a kept state are always kept too.
  std::size_t kept = 0;
  double tail = 1.0;
  while (kept < entries.size()) {
    if (kept > 0 && tail <= weight_tolerance && entries[kept].energy > entries[kept - 1].energy) break;
    tail -= w(static_cast<Eigen::Index>(kept));
    ++kept;
  }
  discarded_ = std::max(0.0, tail);
  const double norm = 1.0 - discarded_;

  const Eigen::Index dim = final_spectrum.dim();
  Eigen::MatrixXd psi = Eigen::MatrixXd::Zero(dim, static_cast<Eigen::Index>(kept));
  for (std::size_t k = 0; k < kept; ++k) {
    const auto& block = initial.blocks()[entries[k].block];
    for (std::size_t r = 0; r < block.states.size(); ++r)
      psi(block.states[r], static_cast<Eigen::Index>(k)) =
          block.vectors(static_cast<Eigen::Index>(r), entries[k].column);
    weights_.push_back(w(static_cast<Eigen::Index>(k)) / norm);
  }

  for (const auto& block : final_spectrum.blocks()) {
    Eigen::MatrixXd restricted(static_cast<Eigen::Index>(block.states.size()), psi.cols());
    for (std::size_t r = 0; r < block.states.size(); ++r)
      restricted.row(static_cast<Eigen::Index>(r)) = psi.row(block.states[r]);
    coefficients_.push_back(block.vectors.transpose() * restricted);
  }
}

std::vector<Eigen::Matrix4cd> QuenchEvolution::pair_series(int site_a, int site_b,
                                                           std::span<const double> times) const {
  if (site_a == site_b || site_a < 0 || site_b < 0 || site_a >= n_sites_ || site_b >= n_sites_)
    throw InvalidArgument("invalid site pair");
  for (double t : times)
    if (!std::isfinite(t) || t < 0.0) throw InvalidArgument("evolution time must be finite and >= 0");

  const Eigen::Index dim = final_.dim();
  const Eigen::Index ma = Eigen::Index{1} << site_bit(n_sites_, site_a);
  const Eigen::Index mb = Eigen::Index{1} << site_bit(n_sites_, site_b);
  const Eigen::Index off[4] = {0, mb, ma, ma | mb};
  std::vector<Eigen::Index> bases;
  bases.reserve(static_cast<std::size_t>(dim / 4));
  for (Eigen::Index base = 0; base < dim; ++base)
    if (!(base & (ma | mb))) bases.push_back(base);

  std::vector<Eigen::Matrix4cd> out(times.size(), Eigen::Matrix4cd::Zero());
  constexpr std::size_t kChunk = 512;
  for (std::size_t start = 0; start < times.size(); start += kChunk) {
    const std::size_t count = std::min(kChunk, times.size() - start);
    const auto tc = static_cast<Eigen::Index>(count);
    const Eigen::Map<const Eigen::VectorXd> t(times.data() + start, tc);
    std::vector<Eigen::MatrixXd> cosines, sines;
    for (const auto& block : final_.blocks()) {
      const Eigen::MatrixXd angle = block.energies * t.transpose();
      cosines.push_back(angle.array().cos().matrix());
      sines.push_back(angle.array().sin().matrix());
    }
    Eigen::MatrixXd re(dim, tc), im(dim, tc);
    for (std::size_t k = 0; k < weights_.size(); ++k) {
      re.setZero();
      im.setZero();
      for (std::size_t b = 0; b < final_.blocks().size(); ++b) {
        const auto& block = final_.blocks()[b];
        const auto c = coefficients_[b].col(static_cast<Eigen::Index>(k));
        if (c.squaredNorm() < 1e-28) continue;
        const Eigen::MatrixXd cos_part = c.asDiagonal() * cosines[b];
        const Eigen::MatrixXd sin_part = c.asDiagonal() * sines[b];
        const Eigen::MatrixXd block_re = block.vectors * cos_part;
        const Eigen::MatrixXd block_im = -(block.vectors * sin_part);
        for (std::size_t r = 0; r < block.states.size(); ++r) {
          re.row(block.states[r]) = block_re.row(static_cast<Eigen::Index>(r));
          im.row(block.states[r]) = block_im.row(static_cast<Eigen::Index>(r));
        }
      }
      const double weight = weights_[k];
      for (Eigen::Index col = 0; col < tc; ++col) {
        Eigen::Matrix4d real_part = Eigen::Matrix4d::Zero();
        Eigen::Matrix4d imag_part = Eigen::Matrix4d::Zero();
        for (Eigen::Index base : bases) {
          Eigen::Vector4d gr, gi;
          for (int p = 0; p < 4; ++p) {
            gr(p) = re(base | off[p], col);
            gi(p) = im(base | off[p], col);
          }
          real_part.noalias() += gr * gr.transpose() + gi * gi.transpose();
          imag_part.noalias() += gi * gr.transpose() - gr * gi.transpose();
        }
        Eigen::Matrix4cd& rho = out[start + static_cast<std::size_t>(col)];
        rho.real() += weight * real_part;
        rho.imag() += weight * imag_part;
      }
    }
  }
  return out;
}

}  // namespace spinergo
