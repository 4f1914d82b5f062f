#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "spinergo/operators.hpp"

using namespace spinergo;

namespace {

Eigen::MatrixXd parity(int n) {
  const auto dim = Eigen::Index{1} << n;
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(dim, dim);
  for (Eigen::Index s = 0; s < dim; ++s) p(s, s) = (__builtin_popcountll(s) % 2) ? -1.0 : 1.0;
  return p;
}

BondGraph two_site_bond() {
  return BondGraph(Geometry::Ring, {2}, 2, {{0, 1, BondKind::Chain}});
}

}  // namespace

TEST(Operators, MatchesKroneckerConstruction) {
  const std::vector<BondGraph> graphs = {build_ring(3), build_ring(5), build_ladder(3), build_torus(3, 3)};
  for (const auto& g : graphs) {
    if (g.n_sites() > 9) continue;
    const ModelParams p{0.8, 0.2, 0.6, 1.0};
    const Eigen::MatrixXd h = build_hamiltonian(g, p);
    const Eigen::MatrixXcd ref = oracle::hamiltonian(g, p.gamma, p.delta, p.field);
    EXPECT_LT((h.cast<std::complex<double>>() - ref).cwiseAbs().maxCoeff(), 1e-13);
  }
}

TEST(Operators, IsotropicBondSpectrum) {
  const auto spec = spectral_decompose(build_hamiltonian(two_site_bond(), {0.0, 1.0, 0.0, 1.0}));
  const Eigen::Vector4d expected(-0.75, 0.25, 0.25, 0.25);
  EXPECT_LT((spec.eigenvalues() - expected).cwiseAbs().maxCoeff(), 1e-12);
  // Ground state is the singlet (|01> - |10>)/sqrt 2, up to phase.
  const Eigen::VectorXd ground = spec.eigenvectors().col(0);
  const Eigen::Vector4d singlet(0.0, 1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0), 0.0);
  EXPECT_NEAR(std::abs(ground.dot(singlet)), 1.0, 1e-12);
}

TEST(Operators, TracelessRing) {
  const Eigen::MatrixXd h = build_hamiltonian(build_ring(3), {0.8, 0.2, 0.6, 1.0});
  EXPECT_NEAR(h.trace(), 0.0, 1e-12);
}

TEST(Operators, PauliZSpectrum) {
  Eigen::Matrix2d z;
  z << 1, 0, 0, -1;
  const auto spec = spectral_decompose(z);
  EXPECT_DOUBLE_EQ(spec.eigenvalues()(0), -1.0);
  EXPECT_DOUBLE_EQ(spec.eigenvalues()(1), 1.0);
}

TEST(Operators, RandomHermitianReconstruction) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> normal;
  Eigen::MatrixXcd a(16, 16);
  for (Eigen::Index i = 0; i < a.size(); ++i) a.data()[i] = {normal(rng), normal(rng)};
  const Eigen::MatrixXcd h = 0.5 * (a + a.adjoint());
  const auto spec = spectral_decompose(h);
  const Eigen::MatrixXcd v = spec.eigenvectors();
  const Eigen::MatrixXcd rebuilt = v * spec.eigenvalues().cast<std::complex<double>>().asDiagonal() * v.adjoint();
  EXPECT_LT((rebuilt - h).norm() / h.norm(), 1e-9);
  EXPECT_LT((v.adjoint() * v - Eigen::MatrixXcd::Identity(16, 16)).cwiseAbs().maxCoeff(), 1e-10);
  for (Eigen::Index k = 1; k < 16; ++k) EXPECT_LE(spec.eigenvalues()(k - 1), spec.eigenvalues()(k));
}

TEST(Operators, SpectralInvariantsOnModel) {
  for (const auto& g : {build_ring(8), build_ladder(4)}) {
    const auto spec = spectral_decompose(build_hamiltonian(g, {0.6, 0.5, 0.4, 1.0}));
    const Eigen::MatrixXd& h = spec.matrix();
    EXPECT_LT((h - h.transpose()).cwiseAbs().maxCoeff(), 1e-12);
    const Eigen::MatrixXd v = spec.eigenvectors();
    EXPECT_LT((v * spec.eigenvalues().asDiagonal() * v.transpose() - h).norm() / h.norm(), 1e-9);
    EXPECT_LT((v.transpose() * v - Eigen::MatrixXd::Identity(h.rows(), h.cols())).cwiseAbs().maxCoeff(), 1e-10);
    // Parity splits the space in two for gamma != 0.
    EXPECT_EQ(spec.blocks().size(), 2u);
  }
}

TEST(Operators, FieldAndInteractionCommutation) {
  const BondGraph g = build_ring(6);
  auto commutator_norm = [&](double gamma) {
    const Eigen::MatrixXd h_int = build_hamiltonian(g, {gamma, 0.3, 0.0, 1.0});
    const Eigen::MatrixXd h_mag = (h_int - build_hamiltonian(g, {gamma, 0.3, 1.0, 1.0}));
    return (h_int * h_mag - h_mag * h_int).norm();
  };
  EXPECT_GT(commutator_norm(0.5), 1e-3);
  EXPECT_LT(commutator_norm(0.0), 1e-10);
}

TEST(Operators, ParityCommutes) {
  const BondGraph g = build_ring(6);
  const Eigen::MatrixXd p = parity(6);
  for (double gamma : {0.0, 0.4, 0.9})
    for (double field : {0.0, 0.7}) {
      const Eigen::MatrixXd h = build_hamiltonian(g, {gamma, 0.8, field, 1.0});
      EXPECT_LT((h * p - p * h).cwiseAbs().maxCoeff(), 1e-10);
    }
}

TEST(Operators, EnergyScaleLinearity) {
  const BondGraph g = build_ring(6);
  const auto one = spectral_decompose(build_hamiltonian(g, {0.4, 0.7, 0.3, 1.0}));
  const auto scaled = spectral_decompose(build_hamiltonian(g, {0.4, 0.7, 0.3, 2.5}));
  EXPECT_LT((scaled.eigenvalues() - 2.5 * one.eigenvalues()).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Operators, Errors) {
  EXPECT_THROW(build_hamiltonian(build_ring(15), {}), CapacityError);
  EXPECT_THROW(build_hamiltonian(build_ring(4), {std::nan(""), 0, 0, 1}), InvalidParameter);
  EXPECT_THROW(build_hamiltonian(build_ring(4), {0, INFINITY, 0, 1}), InvalidParameter);
  Eigen::Matrix2d not_hermitian;
  not_hermitian << 0, 1, 0, 0;
  EXPECT_THROW(spectral_decompose(not_hermitian), InvalidArgument);
}
