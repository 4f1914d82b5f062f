#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "spinergo/dynamics.hpp"
#include "spinergo/lattice.hpp"
#include "spinergo/operators.hpp"
#include "spinergo/qcorr.hpp"

namespace spinergo {

/// Large-time behaviour of a series over the averaging window:
/// (i) flat, (ii) fluctuating below the precision, (iii) fluctuating with
/// finite amplitude so that an explicit average is needed.
enum class FluctuationCase { Flat, BelowPrecision, Oscillating };

std::string to_string(FluctuationCase c);

/// Uniform sampling of Jt/hbar and the averaging window.
struct TimeProtocol {
  double t_max = 200.0;
  double t_step = 0.1;
  double t_large = 100.0;
  double window = 100.0;
  /// Score runs only sample [t_large, t_large + window]; earlier times do not
  /// enter the average.
  bool window_only = true;
};

/// Inclusive uniform grid start, start + step, ..., stop.
std::vector<double> time_grid(double start, double stop, double step);

struct TimeSeries {
  std::vector<double> times;   // strictly increasing
  std::vector<double> values;
  double t_large = 0.0;
  FluctuationCase classification = FluctuationCase::Oscillating;
};

FluctuationCase classify_fluctuations(std::span<const double> times, std::span<const double> values,
                                      double t_large, double window, double precision);

/// Trapezoidal mean of the series over [t_large, t_large + window]. Exact for
/// trigonometric series completing whole periods on a uniform grid.
double time_average(const TimeSeries& series, double window);

/// Log-spaced inverse temperatures over [low_factor, high_factor] * J alpha
/// plus fixed anchor points, sorted and deduplicated.
struct BetaGrid {
  int points = 40;
  double low_factor = 0.1;
  double high_factor = 10.0;
  std::vector<double> anchors = {20.0, 60.0};

  std::vector<double> values(double jalpha) const;
};

struct CanonicalMaximum {
  double value = 0.0;
  double argmax_beta = 0.0;
  bool optimizer_converged = true;
};

/// Largest measure value over canonical states of the post-quench
/// Hamiltonian; ties keep the earliest grid point.
CanonicalMaximum canonical_max(Measure measure, const ThermalPairStates& thermal,
                               std::span<const double> beta_grid, const MeasureOptions& options = {});
CanonicalMaximum canonical_max(Measure measure, const SpectralHamiltonian<double>& final_spectrum,
                               std::pair<int, int> pair, std::span<const double> beta_grid,
                               const MeasureOptions& options = {});

struct ProtocolConfig {
  TimeProtocol time;
  BetaGrid beta;
  MeasureOptions measure;
  PairSelector pair = PairSelector::Auto;
  double zero_threshold = 1e-4;
  double weight_tolerance = 1e-12;
};

/// Post-quench (zero field) side of one (gamma, delta) point, shared across
/// initial fields.
struct QuenchSetup {
  QuenchSetup(BondGraph graph, double gamma, double delta, PairSelector selector);

  BondGraph graph;
  double gamma;
  double delta;
  std::pair<int, int> pair;
  SpectralHamiltonian<double> final_spectrum;
  ThermalPairStates thermal;
};

struct ErgodicityReport {
  Measure measure = Measure::Discord;
  double q_time_avg = 0.0;
  double q_can_max = 0.0;
  double argmax_beta = 0.0;
  double score = 0.0;
  std::vector<double> beta_grid_used;
  std::string geometry;
  std::string dims;
  double gamma = 0.0;
  double delta = 0.0;
  double a = 0.0;
  double jalpha = 0.0;
  FluctuationCase fluctuation = FluctuationCase::Oscillating;
  bool optimizer_converged = true;
  std::size_t kept_states = 0;
  double discarded_weight = 0.0;
};

/// Two-site states of the quenched evolution on the protocol's time grid.
std::vector<Eigen::Matrix4cd> evolved_pair_states(const QuenchSetup& setup, double a, double jalpha,
                                                  std::span<const double> times,
                                                  const ProtocolConfig& protocol,
                                                  std::size_t* kept_states = nullptr,
                                                  double* discarded_weight = nullptr);

/// Full pipeline for one parameter point and several measures sharing the
/// same evolution.
std::vector<ErgodicityReport> ergodicity_scores(const QuenchSetup& setup, double a, double jalpha,
                                                std::span<const Measure> measures,
                                                const ProtocolConfig& protocol = {});

ErgodicityReport ergodicity_score(const BondGraph& graph, const ModelParams& params, double jalpha,
                                  Measure measure, const ProtocolConfig& protocol = {});

struct TransitionResult {
  Measure measure = Measure::Discord;
  std::optional<double> delta_c;
  std::string note;
  std::map<double, double> scores;  // every delta evaluated, scan and refinement
  std::map<double, ErgodicityReport> reports;
  std::vector<double> scan_grid;
};

/// Smallest delta above which the score stays below the zero threshold,
/// bracketed on the scan grid and refined by bisection to `resolution`.
std::vector<TransitionResult> find_transitions(const BondGraph& graph, double gamma, double a,
                                               double jalpha, std::span<const Measure> measures,
                                               std::span<const double> delta_grid, double resolution,
                                               const ProtocolConfig& protocol = {});

TransitionResult find_transition(const BondGraph& graph, double gamma, double a, double jalpha,
                                 Measure measure, std::span<const double> delta_grid,
                                 double resolution, const ProtocolConfig& protocol = {});

}  // namespace spinergo
