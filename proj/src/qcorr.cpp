#include "spinergo/qcorr.hpp"

#include <algorithm>
#include <cmath>

#include "spinergo/errors.hpp"

namespace spinergo {

namespace {

constexpr double kStateTolerance = 1e-8;

// Eigenvalues of a Hermitian 4x4, ascending.
Eigen::Vector4d spectrum(const Eigen::Matrix4cd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> solver(m, Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

double joint_entropy(const Eigen::Matrix4cd& rho) { return shannon_bits(spectrum(rho)); }

// Outcome probabilities and conditional Bloch vectors on qubit A when B is
// measured along n: p = (1 +- b.n)/2, r = (a +- T n) / (1 +- b.n).
template <typename Fn>
double over_outcomes(const BlochForm& form, const Eigen::Vector3d& n, Fn&& term) {
  const double bn = form.b.dot(n);
  const Eigen::Vector3d tn = form.t * n;
  double total = 0.0;
  for (double sign : {1.0, -1.0}) {
    const double scale = 1.0 + sign * bn;
    const double p = 0.5 * scale;
    if (p <= 1e-15) continue;
    total += term(p, ((form.a + sign * tn) / scale).norm());
  }
  return total;
}

double clamp_nonnegative(double v) { return v > 0.0 ? v : 0.0; }

}  // namespace

void validate_two_qubit_state(const Eigen::Matrix4cd& rho) {
  if (!rho.allFinite()) throw InvalidState("two-qubit state has non-finite entries");
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > kStateTolerance)
    throw InvalidState("two-qubit state is not Hermitian");
  if (std::abs(rho.trace() - 1.0) > kStateTolerance)
    throw InvalidState("two-qubit state trace is not 1");
  if (spectrum(rho).minCoeff() < -kStateTolerance)
    throw InvalidState("two-qubit state is not positive semidefinite");
}

Eigen::Matrix4cd partial_transpose(const Eigen::Matrix4cd& rho) {
  Eigen::Matrix4cd out;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int a2 = 0; a2 < 2; ++a2)
        for (int b2 = 0; b2 < 2; ++b2) out(2 * a + b, 2 * a2 + b2) = rho(2 * a + b2, 2 * a2 + b);
  return out;
}

MeasureValue log_negativity(const Eigen::Matrix4cd& rho) {
  validate_two_qubit_state(rho);
  const Eigen::Vector4d ev = spectrum(partial_transpose(rho));
  double negativity = 0.0;
  for (int k = 0; k < 4; ++k)
    if (ev(k) < 0.0) negativity -= ev(k);
  return {std::log2(2.0 * negativity + 1.0), std::nullopt, Side::B};
}

MeasureValue concurrence(const Eigen::Matrix4cd& rho) {
  validate_two_qubit_state(rho);
  // With rho = X X^dagger, the square roots of the spectrum of rho rho~ are the
  // singular values of X^T (sy sy) X. Eigenvalues at the rounding floor are
  // dropped from X; taking their square roots would inject ~1e-8 noise.
  constexpr double kRankFloor = 1e-14;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> solver(rho);
  Eigen::Matrix4cd x = Eigen::Matrix4cd::Zero();
  for (int k = 0; k < 4; ++k) {
    const double d = solver.eigenvalues()(k);
    if (d > kRankFloor) x.col(k) = solver.eigenvectors().col(k) * std::sqrt(d);
  }
  const Eigen::Matrix4cd tau = x.transpose() * kron(pauli(2), pauli(2)) * x;
  const Eigen::Vector4d lambda = Eigen::JacobiSVD<Eigen::Matrix4cd>(tau).singularValues();  // descending
  return {clamp_nonnegative(lambda(0) - lambda(1) - lambda(2) - lambda(3)), std::nullopt, Side::B};
}

double mutual_information(const Eigen::Matrix4cd& rho) {
  validate_two_qubit_state(rho);
  const BlochForm f = bloch_form(rho);
  return clamp_nonnegative(qubit_entropy(f.a.norm()) + qubit_entropy(f.b.norm()) -
                           joint_entropy(rho));
}

double measured_conditional_entropy(const BlochForm& form, const Eigen::Vector3d& direction) {
  return over_outcomes(form, direction, [](double p, double r) { return p * qubit_entropy(r); });
}

double dephased_entropy(const BlochForm& form, const Eigen::Vector3d& direction) {
  return over_outcomes(form, direction, [](double p, double r) {
    return p * qubit_entropy(r) - p * std::log2(p);
  });
}

MeasureValue quantum_discord(const Eigen::Matrix4cd& rho, Side measured,
                             const OptimizerConfig& config) {
  validate_two_qubit_state(rho);
  BlochForm form = bloch_form(rho);
  if (measured == Side::A) form = swapped(form);
  // With B measured: D = S(B) - S(AB) + min sum_i p_i S(A|i).
  const OptimizerReport report = minimize_on_sphere(
      [&form](const Eigen::Vector3d& n) { return measured_conditional_entropy(form, n); }, config);
  const double value = qubit_entropy(form.b.norm()) - joint_entropy(rho) + report.value;
  return {clamp_nonnegative(value), report, measured};
}

MeasureValue work_deficit(const Eigen::Matrix4cd& rho, const OptimizerConfig& config) {
  validate_two_qubit_state(rho);
  const BlochForm form = bloch_form(rho);
  const double joint = joint_entropy(rho);
  MeasureValue best;
  for (Side side : {Side::B, Side::A}) {
    const BlochForm oriented = side == Side::B ? form : swapped(form);
    const OptimizerReport report = minimize_on_sphere(
        [&oriented](const Eigen::Vector3d& n) { return dephased_entropy(oriented, n); }, config);
    const double value = clamp_nonnegative(report.value - joint);
    if (!best.optimizer || value < best.value) best = {value, report, side};
  }
  return best;
}

MeasureValue evaluate(Measure measure, const Eigen::Matrix4cd& rho, const MeasureOptions& options) {
  switch (measure) {
    case Measure::LogNegativity:
      return log_negativity(rho);
    case Measure::Concurrence:
      return concurrence(rho);
    case Measure::Discord:
      return quantum_discord(rho, options.discord_side, options.optimizer);
    case Measure::WorkDeficit:
      return work_deficit(rho, options.optimizer);
  }
  throw InvalidArgument("unknown measure");
}

Measure parse_measure(std::string_view text) {
  if (text == "log_negativity") return Measure::LogNegativity;
  if (text == "concurrence") return Measure::Concurrence;
  if (text == "discord") return Measure::Discord;
  if (text == "work_deficit") return Measure::WorkDeficit;
  throw InvalidArgument("unknown measure '" + std::string(text) + "'");
}

std::string to_string(Measure measure) {
  switch (measure) {
    case Measure::LogNegativity:
      return "log_negativity";
    case Measure::Concurrence:
      return "concurrence";
    case Measure::Discord:
      return "discord";
    case Measure::WorkDeficit:
      return "work_deficit";
  }
  return "?";
}

Side parse_side(std::string_view text) {
  if (text == "A" || text == "a") return Side::A;
  if (text == "B" || text == "b") return Side::B;
  throw InvalidArgument("unknown side '" + std::string(text) + "'");
}

}  // namespace spinergo
