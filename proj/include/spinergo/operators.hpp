#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <sstream>
#include <vector>

#include "spinergo/errors.hpp"
#include "spinergo/lattice.hpp"

namespace spinergo {

/// Dense Hilbert spaces stop at this many sites.
inline constexpr int kMaxSites = 14;

/// Couplings of the XYZ model in a uniform z field, in units of J.
///
///   H = (J/4) sum_bonds [(1+gamma) XX + (1-gamma) YY + delta ZZ] - (J/2) field sum_sites Z
struct ModelParams {
  double gamma = 0.0;
  double delta = 0.0;
  double field = 0.0;
  double coupling = 1.0;  // J
};

/// Bit position of a site in a computational-basis index. Site 0 is the most
/// significant qubit; bit value 0 is spin up (sigma^z = +1).
inline int site_bit(int n_sites, int site) { return n_sites - 1 - site; }

/// Dense real Hamiltonian in the sigma^z product basis. The model is real
/// symmetric because Y (x) Y has only real entries.
Eigen::MatrixXd build_hamiltonian(const BondGraph& graph, const ModelParams& params);

/// Hermitian matrix with a cached eigendecomposition.
///
/// The decomposition is computed per connected block of the matrix's
/// sparsity graph (for the XYZ model these are the sigma^z-parity sectors),
/// so eigenvectors live on a subset of basis states.
template <typename Scalar>
class SpectralHamiltonian {
 public:
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  struct Block {
    std::vector<Eigen::Index> states;  // ascending basis indices
    Eigen::VectorXd energies;          // ascending
    Matrix vectors;                    // states.size() square, columns are eigenvectors
  };

  SpectralHamiltonian(Matrix matrix, std::vector<Block> blocks)
      : matrix_(std::move(matrix)), blocks_(std::move(blocks)) {
    const Eigen::Index n = matrix_.rows();
    order_.reserve(static_cast<std::size_t>(n));
    for (std::size_t b = 0; b < blocks_.size(); ++b)
      for (Eigen::Index k = 0; k < blocks_[b].energies.size(); ++k) order_.push_back({b, k});
    std::stable_sort(order_.begin(), order_.end(), [this](const Slot& x, const Slot& y) {
      return blocks_[x.block].energies(x.index) < blocks_[y.block].energies(y.index);
    });
    eigenvalues_.resize(n);
    for (Eigen::Index k = 0; k < n; ++k) {
      const Slot& s = order_[static_cast<std::size_t>(k)];
      eigenvalues_(k) = blocks_[s.block].energies(s.index);
    }
  }

  Eigen::Index dim() const noexcept { return matrix_.rows(); }
  const Matrix& matrix() const noexcept { return matrix_; }
  const std::vector<Block>& blocks() const noexcept { return blocks_; }
  const Eigen::VectorXd& eigenvalues() const noexcept { return eigenvalues_; }
  double ground_energy() const { return eigenvalues_(0); }

  /// Dense unitary whose k-th column pairs with eigenvalues()(k).
  Matrix eigenvectors() const {
    Matrix v = Matrix::Zero(dim(), dim());
    for (Eigen::Index k = 0; k < dim(); ++k) {
      const Slot& s = order_[static_cast<std::size_t>(k)];
      const Block& block = blocks_[s.block];
      for (std::size_t r = 0; r < block.states.size(); ++r)
        v(block.states[r], k) = block.vectors(static_cast<Eigen::Index>(r), s.index);
    }
    return v;
  }

 private:
  struct Slot {
    std::size_t block;
    Eigen::Index index;
  };

  Matrix matrix_;
  std::vector<Block> blocks_;
  std::vector<Slot> order_;
  Eigen::VectorXd eigenvalues_;
};

namespace detail {

inline Eigen::Index find_root(std::vector<Eigen::Index>& parent, Eigen::Index x) {
  while (parent[static_cast<std::size_t>(x)] != x) {
    parent[static_cast<std::size_t>(x)] =
        parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
    x = parent[static_cast<std::size_t>(x)];
  }
  return x;
}

}  // namespace detail

/// Diagonalizes a Hermitian matrix block by block.
template <typename Derived>
SpectralHamiltonian<typename Derived::Scalar> spectral_decompose(
    const Eigen::MatrixBase<Derived>& input) {
  using Scalar = typename Derived::Scalar;
  using Result = SpectralHamiltonian<Scalar>;
  using Matrix = typename Result::Matrix;

  Matrix matrix = input;
  const Eigen::Index n = matrix.rows();
  if (n == 0 || matrix.cols() != n) throw InvalidArgument("spectral_decompose needs a square matrix");
  const double scale = std::max(1.0, matrix.cwiseAbs().maxCoeff());
  if ((matrix - matrix.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw InvalidArgument("spectral_decompose needs a Hermitian matrix");

  std::vector<Eigen::Index> parent(static_cast<std::size_t>(n));
  std::iota(parent.begin(), parent.end(), Eigen::Index{0});
  for (Eigen::Index c = 0; c < n; ++c)
    for (Eigen::Index r = 0; r < c; ++r)
      if (matrix(r, c) != Scalar(0)) {
        const Eigen::Index a = detail::find_root(parent, r);
        const Eigen::Index b = detail::find_root(parent, c);
        if (a != b) parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
      }

  // Blocks ordered by their smallest basis index.
  std::vector<std::vector<Eigen::Index>> members;
  std::vector<Eigen::Index> slot(static_cast<std::size_t>(n), -1);
  for (Eigen::Index s = 0; s < n; ++s) {
    const Eigen::Index root = detail::find_root(parent, s);
    auto& id = slot[static_cast<std::size_t>(root)];
    if (id < 0) {
      id = static_cast<Eigen::Index>(members.size());
      members.emplace_back();
    }
    members[static_cast<std::size_t>(id)].push_back(s);
  }

  std::vector<typename Result::Block> blocks;
  blocks.reserve(members.size());
  for (auto& states : members) {
    const auto m = static_cast<Eigen::Index>(states.size());
    Matrix sub(m, m);
    for (Eigen::Index c = 0; c < m; ++c)
      for (Eigen::Index r = 0; r < m; ++r)
        sub(r, c) = matrix(states[static_cast<std::size_t>(r)], states[static_cast<std::size_t>(c)]);
    Eigen::SelfAdjointEigenSolver<Matrix> solver(sub);
    if (solver.info() != Eigen::Success) {
      std::ostringstream msg;
      msg << "eigensolver failed on a " << m << "x" << m << " block (max |entry| " << scale
          << ", Frobenius norm " << sub.norm() << ")";
      throw NumericalError(msg.str());
    }
    blocks.push_back({std::move(states), solver.eigenvalues(), solver.eigenvectors()});
  }
  return Result(std::move(matrix), std::move(blocks));
}

extern template class SpectralHamiltonian<double>;
extern template class SpectralHamiltonian<std::complex<double>>;

}  // namespace spinergo
