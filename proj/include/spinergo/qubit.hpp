#pragma once

#include <Eigen/Dense>
#include <array>
#include <complex>

namespace spinergo {

/// Pauli matrix by index: 0 = identity, 1 = x, 2 = y, 3 = z.
Eigen::Matrix2cd pauli(int index);

/// Two-qubit state in Pauli coordinates:
///   rho = 1/4 [I + a.sigma (x) I + I (x) b.sigma + sum_ij t_ij sigma_i (x) sigma_j]
struct BlochForm {
  Eigen::Vector3d a = Eigen::Vector3d::Zero();
  Eigen::Vector3d b = Eigen::Vector3d::Zero();
  Eigen::Matrix3d t = Eigen::Matrix3d::Zero();
};

BlochForm bloch_form(const Eigen::Matrix4cd& rho);
Eigen::Matrix4cd to_matrix(const BlochForm& form);

/// Same state with the two qubits exchanged.
BlochForm swapped(const BlochForm& form);

/// Base-2 von Neumann entropy of a qubit with Bloch vector length r.
double qubit_entropy(double bloch_length);

/// Binary Shannon entropy in bits; h(0) = h(1) = 0.
double binary_entropy(double p);

/// -sum p log2 p over eigenvalues, with negative rounding noise dropped.
template <typename Derived>
double shannon_bits(const Eigen::MatrixBase<Derived>& probabilities) {
  double s = 0.0;
  for (Eigen::Index k = 0; k < probabilities.size(); ++k) {
    const double p = probabilities(k);
    if (p > 0.0) s -= p * std::log2(p);
  }
  return s;
}

/// Von Neumann entropy in bits of a Hermitian matrix.
template <typename Derived>
double von_neumann_entropy(const Eigen::MatrixBase<Derived>& rho) {
  using Matrix = Eigen::Matrix<typename Derived::Scalar, Derived::RowsAtCompileTime,
                               Derived::ColsAtCompileTime>;
  Eigen::SelfAdjointEigenSolver<Matrix> solver(rho, Eigen::EigenvaluesOnly);
  return shannon_bits(solver.eigenvalues());
}

/// Kronecker product of two single-qubit operators, first factor on the more
/// significant qubit.
Eigen::Matrix4cd kron(const Eigen::Matrix2cd& left, const Eigen::Matrix2cd& right);

}  // namespace spinergo
