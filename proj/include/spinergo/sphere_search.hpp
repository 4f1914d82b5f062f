#pragma once

#include <Eigen/Dense>
#include <functional>

namespace spinergo {

/// Bloch-sphere direction (sin t cos p, sin t sin p, cos t) for a rank-1
/// projective measurement {P+, P-}.
struct MeasurementSetting {
  double theta = 0.0;  // [0, pi]
  double phi = 0.0;    // [0, 2 pi)

  Eigen::Vector3d direction() const;
};

struct OptimizerConfig {
  int grid_theta = 65;
  int grid_phi = 129;
  double tolerance = 1e-9;  // simplex value spread at convergence
  int max_steps = 200;
};

struct OptimizerReport {
  MeasurementSetting best;
  double value = 0.0;
  int grid_theta = 0;
  int grid_phi = 0;
  int iterations = 0;
  bool converged = false;
};

/// Minimizes f over unit vectors: a (theta, phi) grid scan followed by a
/// Nelder-Mead simplex started at the best grid point.
OptimizerReport minimize_on_sphere(const std::function<double(const Eigen::Vector3d&)>& f,
                                   const OptimizerConfig& config = {});

}  // namespace spinergo
