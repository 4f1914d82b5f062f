#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <string_view>

#include "spinergo/qubit.hpp"
#include "spinergo/sphere_search.hpp"

namespace spinergo {

enum class Measure { LogNegativity, Concurrence, Discord, WorkDeficit };

/// Which qubit the projective measurement acts on.
enum class Side { A, B };

struct MeasureValue {
  double value = 0.0;
  std::optional<OptimizerReport> optimizer;  // set for discord and work deficit
  Side side = Side::B;                       // side measured, when optimized
};

struct MeasureOptions {
  OptimizerConfig optimizer;
  Side discord_side = Side::B;
};

/// Throws InvalidState unless rho is Hermitian, unit trace and positive to 1e-8.
void validate_two_qubit_state(const Eigen::Matrix4cd& rho);

/// Partial transpose on the second qubit.
Eigen::Matrix4cd partial_transpose(const Eigen::Matrix4cd& rho);

/// log2(2 N + 1), N the summed magnitude of negative partial-transpose eigenvalues.
MeasureValue log_negativity(const Eigen::Matrix4cd& rho);

/// max(0, l1 - l2 - l3 - l4) over the square-root spectrum of rho (sy sy) rho* (sy sy).
MeasureValue concurrence(const Eigen::Matrix4cd& rho);

/// S(A) + S(B) - S(AB) in bits.
double mutual_information(const Eigen::Matrix4cd& rho);

/// Sum over outcomes of p_i S(rho_unmeasured|i) for a projective measurement
/// along `direction` on qubit B of `form`.
double measured_conditional_entropy(const BlochForm& form, const Eigen::Vector3d& direction);

/// Entropy of the state after dephasing qubit B along `direction`.
double dephased_entropy(const BlochForm& form, const Eigen::Vector3d& direction);

/// Mutual information minus the best one-way classical correlation, in bits.
MeasureValue quantum_discord(const Eigen::Matrix4cd& rho, Side measured = Side::B,
                             const OptimizerConfig& config = {});

/// One-way work deficit in qubits: min over projective dephasing of one
/// qubit of S(dephased) - S(rho), the better of the two sides.
MeasureValue work_deficit(const Eigen::Matrix4cd& rho, const OptimizerConfig& config = {});

MeasureValue evaluate(Measure measure, const Eigen::Matrix4cd& rho, const MeasureOptions& options = {});

Measure parse_measure(std::string_view text);
std::string to_string(Measure measure);
Side parse_side(std::string_view text);

}  // namespace spinergo
