#include "spinergo/sphere_search.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

namespace spinergo {

namespace {

constexpr double kPi = std::numbers::pi;

MeasurementSetting canonical(double theta, double phi) {
  // Fold an unconstrained (theta, phi) back onto theta in [0, pi].
  theta = std::fmod(theta, 2.0 * kPi);
  if (theta < 0.0) theta += 2.0 * kPi;
  if (theta > kPi) {
    theta = 2.0 * kPi - theta;
    phi += kPi;
  }
  phi = std::fmod(phi, 2.0 * kPi);
  if (phi < 0.0) phi += 2.0 * kPi;
  return {theta, phi};
}

}  // namespace

Eigen::Vector3d MeasurementSetting::direction() const {
  return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)};
}

OptimizerReport minimize_on_sphere(const std::function<double(const Eigen::Vector3d&)>& f,
                                   const OptimizerConfig& config) {
  const int nt = std::max(config.grid_theta, 2);
  const int np = std::max(config.grid_phi, 1);
  const double dt = kPi / (nt - 1);
  const double dp = 2.0 * kPi / np;

  auto eval = [&f](double theta, double phi) {
    return f(MeasurementSetting{theta, phi}.direction());
  };

  OptimizerReport report;
  report.grid_theta = nt;
  report.grid_phi = np;
  report.value = std::numeric_limits<double>::infinity();
  for (int i = 0; i < nt; ++i) {
    const double theta = i * dt;
    // The poles are a single point; one azimuth suffices there.
    const int phis = (i == 0 || i == nt - 1) ? 1 : np;
    for (int j = 0; j < phis; ++j) {
      const double v = eval(theta, j * dp);
      if (v < report.value) {
        report.value = v;
        report.best = {theta, j * dp};
      }
    }
  }

  using Point = std::array<double, 2>;
  auto blend = [](const Point& a, const Point& b, double s) {
    return Point{a[0] + s * (b[0] - a[0]), a[1] + s * (b[1] - a[1])};
  };

  std::array<Point, 3> x;
  std::array<double, 3> fx;
  // Nelder-Mead from `start` with edge lengths (ht, hp). Returns true on convergence.
  auto simplex = [&](Point start, double ht, double hp) {
    x = {start, Point{start[0] + ht, start[1]}, Point{start[0], start[1] + hp}};
    for (int k = 0; k < 3; ++k) fx[k] = eval(x[k][0], x[k][1]);
    for (int step = 0; step < config.max_steps; ++step, ++report.iterations) {
      std::array<int, 3> order = {0, 1, 2};
      std::sort(order.begin(), order.end(), [&](int a, int b) { return fx[a] < fx[b]; });
      const int best = order[0], mid = order[1], worst = order[2];
      const double size = std::max(std::hypot(x[mid][0] - x[best][0], x[mid][1] - x[best][1]),
                                   std::hypot(x[worst][0] - x[best][0], x[worst][1] - x[best][1]));
      if (fx[worst] - fx[best] < config.tolerance || size < 1e-12) return true;
      const Point centroid = blend(x[best], x[mid], 0.5);
      const Point reflected = blend(centroid, x[worst], -1.0);
      const double fr = eval(reflected[0], reflected[1]);
      if (fr < fx[best]) {
        const Point expanded = blend(centroid, x[worst], -2.0);
        const double fe = eval(expanded[0], expanded[1]);
        if (fe < fr) {
          x[worst] = expanded;
          fx[worst] = fe;
        } else {
          x[worst] = reflected;
          fx[worst] = fr;
        }
        continue;
      }
      if (fr < fx[mid]) {
        x[worst] = reflected;
        fx[worst] = fr;
        continue;
      }
      const bool outside = fr < fx[worst];
      const Point contracted = blend(centroid, outside ? reflected : x[worst], 0.5);
      const double fc = eval(contracted[0], contracted[1]);
      if (fc < std::min(fr, fx[worst])) {
        x[worst] = contracted;
        fx[worst] = fc;
        continue;
      }
      for (int k : {mid, worst}) {
        x[k] = blend(x[best], x[k], 0.5);
        fx[k] = eval(x[k][0], x[k][1]);
      }
    }
    return false;
  };

  // A collapsed simplex can stop short of the minimum; restart from the best
  // point until a restart no longer improves the value.
  Point start = {report.best.theta, report.best.phi};
  double previous = report.value;
  double ht = dt, hp = dp;
  for (int restart = 0; restart < 5; ++restart) {
    report.converged = simplex(start, ht, hp);
    const int best = static_cast<int>(std::min_element(fx.begin(), fx.end()) - fx.begin());
    const double gain = previous - fx[best];
    if (fx[best] < previous) {
      previous = fx[best];
      start = x[best];
    }
    if (!report.converged || gain < config.tolerance) break;
    ht = std::max(dt / 8.0, 1e-4);
    hp = std::max(dp / 8.0, 1e-4);
  }

  const int best = static_cast<int>(std::min_element(fx.begin(), fx.end()) - fx.begin());
  if (fx[best] < report.value) {
    report.value = fx[best];
    report.best = canonical(x[best][0], x[best][1]);
  }
  return report;
}

}  // namespace spinergo
