#include "spinergo/qubit.hpp"

#include <algorithm>
#include <cmath>

namespace spinergo {

using namespace std::complex_literals;

Eigen::Matrix2cd pauli(int index) {
  Eigen::Matrix2cd m;
  switch (index) {
    case 1:
      m << 0.0, 1.0, 1.0, 0.0;
      break;
    case 2:
      m << 0.0, -1.0i, 1.0i, 0.0;
      break;
    case 3:
      m << 1.0, 0.0, 0.0, -1.0;
      break;
    default:
      m.setIdentity();
  }
  return m;
}

Eigen::Matrix4cd kron(const Eigen::Matrix2cd& left, const Eigen::Matrix2cd& right) {
  Eigen::Matrix4cd out;
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) out.block<2, 2>(2 * r, 2 * c) = left(r, c) * right;
  return out;
}

namespace {

const std::array<std::array<Eigen::Matrix4cd, 4>, 4>& pauli_products() {
  static const auto table = [] {
    std::array<std::array<Eigen::Matrix4cd, 4>, 4> t;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) t[i][j] = kron(pauli(i), pauli(j));
    return t;
  }();
  return table;
}

}  // namespace

BlochForm bloch_form(const Eigen::Matrix4cd& rho) {
  const auto& p = pauli_products();
  auto expect = [&](int i, int j) { return (p[i][j] * rho).trace().real(); };
  BlochForm f;
  for (int i = 0; i < 3; ++i) {
    f.a(i) = expect(i + 1, 0);
    f.b(i) = expect(0, i + 1);
    for (int j = 0; j < 3; ++j) f.t(i, j) = expect(i + 1, j + 1);
  }
  return f;
}

Eigen::Matrix4cd to_matrix(const BlochForm& form) {
  const auto& p = pauli_products();
  Eigen::Matrix4cd rho = p[0][0];
  for (int i = 0; i < 3; ++i) {
    rho += form.a(i) * p[i + 1][0] + form.b(i) * p[0][i + 1];
    for (int j = 0; j < 3; ++j) rho += form.t(i, j) * p[i + 1][j + 1];
  }
  return 0.25 * rho;
}

BlochForm swapped(const BlochForm& form) { return {form.b, form.a, form.t.transpose()}; }

double binary_entropy(double p) {
  if (p <= 0.0 || p >= 1.0) return 0.0;
  return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

double qubit_entropy(double bloch_length) {
  const double r = std::clamp(bloch_length, 0.0, 1.0);
  return binary_entropy(0.5 * (1.0 + r));
}

}  // namespace spinergo
