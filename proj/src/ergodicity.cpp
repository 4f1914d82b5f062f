#include "spinergo/ergodicity.hpp"

#include <algorithm>
#include <cmath>

#include "spinergo/errors.hpp"

namespace spinergo {

std::string to_string(FluctuationCase c) {
  switch (c) {
    case FluctuationCase::Flat:
      return "i";
    case FluctuationCase::BelowPrecision:
      return "ii";
    case FluctuationCase::Oscillating:
      return "iii";
  }
  return "?";
}

std::vector<double> time_grid(double start, double stop, double step) {
  if (!(step > 0.0) || !std::isfinite(step) || !(stop >= start))
    throw InvalidArgument("time grid needs step > 0 and stop >= start");
  const auto n = static_cast<long long>(std::llround((stop - start) / step));
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(n + 1));
  for (long long k = 0; k <= n; ++k) grid.push_back(start + static_cast<double>(k) * step);
  return grid;
}

namespace {

constexpr double kTimeSlack = 1e-9;

// Index range [first, last] of samples inside the averaging window.
std::pair<std::size_t, std::size_t> window_range(std::span<const double> times, double t_large,
                                                 double window) {
  if (!(window > 0.0)) throw InvalidWindow("averaging window must be positive");
  if (times.size() < 2) throw InvalidWindow("series has fewer than two samples");
  for (std::size_t k = 1; k < times.size(); ++k)
    if (!(times[k] > times[k - 1])) throw InvalidWindow("series times must be strictly increasing");
  const double end = t_large + window;
  if (times.front() > t_large + kTimeSlack || times.back() < end - kTimeSlack)
    throw InvalidWindow("series does not cover the averaging window");
  const auto lo = std::lower_bound(times.begin(), times.end(), t_large - kTimeSlack);
  const auto hi = std::upper_bound(times.begin(), times.end(), end + kTimeSlack);
  const auto first = static_cast<std::size_t>(lo - times.begin());
  const auto last = static_cast<std::size_t>(hi - times.begin()) - 1;
  if (last <= first) throw InvalidWindow("averaging window holds fewer than two samples");
  if (std::abs(times[first] - t_large) > kTimeSlack) throw InvalidWindow("t_large is not a sample time");
  return {first, last};
}

}  // namespace

FluctuationCase classify_fluctuations(std::span<const double> times, std::span<const double> values,
                                      double t_large, double window, double precision) {
  if (times.size() != values.size()) throw InvalidArgument("times and values differ in length");
  const auto [first, last] = window_range(times, t_large, window);
  const auto [lo, hi] = std::minmax_element(values.begin() + static_cast<std::ptrdiff_t>(first),
                                            values.begin() + static_cast<std::ptrdiff_t>(last) + 1);
  const double amplitude = *hi - *lo;
  if (amplitude <= 1e-12) return FluctuationCase::Flat;
  if (amplitude < precision) return FluctuationCase::BelowPrecision;
  return FluctuationCase::Oscillating;
}

double time_average(const TimeSeries& series, double window) {
  if (series.times.size() != series.values.size())
    throw InvalidArgument("times and values differ in length");
  const auto [first, last] = window_range(series.times, series.t_large, window);
  double integral = 0.0;
  for (std::size_t k = first; k < last; ++k)
    integral += 0.5 * (series.values[k] + series.values[k + 1]) *
                (series.times[k + 1] - series.times[k]);
  return integral / (series.times[last] - series.times[first]);
}

std::vector<double> BetaGrid::values(double jalpha) const {
  if (!(jalpha > 0.0)) throw InvalidArgument("J alpha must be positive");
  if (points < 1 || !(low_factor > 0.0) || !(high_factor >= low_factor))
    throw InvalidArgument("invalid inverse-temperature grid");
  std::vector<double> grid;
  const double lo = std::log(low_factor * jalpha);
  const double hi = std::log(high_factor * jalpha);
  for (int k = 0; k < points; ++k)
    grid.push_back(points == 1 ? std::exp(lo) : std::exp(lo + (hi - lo) * k / (points - 1)));
  for (double anchor : anchors)
    if (anchor > 0.0) grid.push_back(anchor);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end(),
                         [](double x, double y) { return std::abs(x - y) <= 1e-12 * std::abs(y); }),
             grid.end());
  return grid;
}

CanonicalMaximum canonical_max(Measure measure, const ThermalPairStates& thermal,
                               std::span<const double> beta_grid, const MeasureOptions& options) {
  if (beta_grid.empty()) throw InvalidArgument("inverse-temperature grid is empty");
  CanonicalMaximum best;
  bool first = true;
  for (double beta : beta_grid) {
    if (!(beta > 0.0)) throw InvalidArgument("inverse temperatures must be positive");
    const MeasureValue v = evaluate(measure, thermal.at(beta), options);
    if (v.optimizer && !v.optimizer->converged) best.optimizer_converged = false;
    if (first || v.value > best.value) {
      best.value = v.value;
      best.argmax_beta = beta;
      first = false;
    }
  }
  return best;
}

CanonicalMaximum canonical_max(Measure measure, const SpectralHamiltonian<double>& final_spectrum,
                               std::pair<int, int> pair, std::span<const double> beta_grid,
                               const MeasureOptions& options) {
  const ThermalPairStates thermal(final_spectrum, pair.first, pair.second);
  return canonical_max(measure, thermal, beta_grid, options);
}

QuenchSetup::QuenchSetup(BondGraph graph_in, double gamma_in, double delta_in,
                         PairSelector selector)
    : graph(std::move(graph_in)),
      gamma(gamma_in),
      delta(delta_in),
      pair(graph.pair(selector)),
      final_spectrum(spectral_decompose(build_hamiltonian(graph, {gamma, delta, 0.0, 1.0}))),
      thermal(final_spectrum, pair.first, pair.second) {}

std::vector<Eigen::Matrix4cd> evolved_pair_states(const QuenchSetup& setup, double a, double jalpha,
                                                  std::span<const double> times,
                                                  const ProtocolConfig& protocol,
                                                  std::size_t* kept_states,
                                                  double* discarded_weight) {
  if (!(jalpha > 0.0) || !std::isfinite(jalpha)) throw InvalidArgument("J alpha must be positive");
  const auto initial =
      spectral_decompose(build_hamiltonian(setup.graph, {setup.gamma, setup.delta, a, 1.0}));
  const QuenchEvolution evolution(initial, jalpha, setup.final_spectrum, protocol.weight_tolerance);
  if (kept_states) *kept_states = evolution.kept_states();
  if (discarded_weight) *discarded_weight = evolution.discarded_weight();
  return evolution.pair_series(setup.pair.first, setup.pair.second, times);
}

std::vector<ErgodicityReport> ergodicity_scores(const QuenchSetup& setup, double a, double jalpha,
                                                std::span<const Measure> measures,
                                                const ProtocolConfig& protocol) {
  const TimeProtocol& tp = protocol.time;
  const std::vector<double> times =
      tp.window_only ? time_grid(tp.t_large, tp.t_large + tp.window, tp.t_step)
                     : time_grid(0.0, tp.t_max, tp.t_step);
  std::size_t kept = 0;
  double discarded = 0.0;
  const auto states = evolved_pair_states(setup, a, jalpha, times, protocol, &kept, &discarded);
  const std::vector<double> betas = protocol.beta.values(jalpha);

  std::vector<ErgodicityReport> reports;
  for (Measure measure : measures) {
    ErgodicityReport report;
    report.measure = measure;
    TimeSeries series{times, {}, tp.t_large, FluctuationCase::Oscillating};
    series.values.reserve(times.size());
    for (const auto& rho : states) {
      const MeasureValue v = evaluate(measure, rho, protocol.measure);
      if (v.optimizer && !v.optimizer->converged) report.optimizer_converged = false;
      series.values.push_back(v.value);
    }
    series.classification = classify_fluctuations(series.times, series.values, tp.t_large,
                                                  tp.window, protocol.zero_threshold);
    report.q_time_avg = time_average(series, tp.window);
    const CanonicalMaximum can = canonical_max(measure, setup.thermal, betas, protocol.measure);
    if (!can.optimizer_converged) report.optimizer_converged = false;
    report.q_can_max = can.value;
    report.argmax_beta = can.argmax_beta;
    report.score = std::max(0.0, report.q_time_avg - report.q_can_max);
    report.beta_grid_used = betas;
    report.geometry = setup.graph.tag();
    report.dims = setup.graph.dims_string();
    report.gamma = setup.gamma;
    report.delta = setup.delta;
    report.a = a;
    report.jalpha = jalpha;
    report.fluctuation = series.classification;
    report.kept_states = kept;
    report.discarded_weight = discarded;
    reports.push_back(std::move(report));
  }
  return reports;
}

ErgodicityReport ergodicity_score(const BondGraph& graph, const ModelParams& params, double jalpha,
                                  Measure measure, const ProtocolConfig& protocol) {
  if (params.coupling != 1.0) throw InvalidParameter("the pipeline works in units of J = 1");
  const QuenchSetup setup(graph, params.gamma, params.delta, protocol.pair);
  const Measure one[1] = {measure};
  return ergodicity_scores(setup, params.field, jalpha, one, protocol).front();
}

std::vector<TransitionResult> find_transitions(const BondGraph& graph, double gamma, double a,
                                               double jalpha, std::span<const Measure> measures,
                                               std::span<const double> delta_grid, double resolution,
                                               const ProtocolConfig& protocol) {
  if (!(resolution > 0.0)) throw InvalidArgument("transition resolution must be positive");
  if (delta_grid.size() < 2) throw InvalidArgument("delta scan needs at least two points");
  std::vector<double> grid(delta_grid.begin(), delta_grid.end());
  std::sort(grid.begin(), grid.end());

  std::map<double, std::vector<ErgodicityReport>> cache;
  auto scores_at = [&](double delta) -> const std::vector<ErgodicityReport>& {
    auto it = cache.find(delta);
    if (it == cache.end()) {
      const QuenchSetup setup(graph, gamma, delta, protocol.pair);
      it = cache.emplace(delta, ergodicity_scores(setup, a, jalpha, measures, protocol)).first;
    }
    return it->second;
  };
  for (double delta : grid) scores_at(delta);

  std::vector<TransitionResult> results;
  for (std::size_t m = 0; m < measures.size(); ++m) {
    TransitionResult result;
    result.measure = measures[m];
    auto score = [&](double delta) { return scores_at(delta)[m].score; };
    const double threshold = protocol.zero_threshold;

    // First grid index from which every larger delta is below threshold.
    std::size_t start = grid.size();
    while (start > 0 && score(grid[start - 1]) < threshold) --start;
    if (start == grid.size()) {
      result.note = "score above threshold at the top of the delta range";
    } else if (start == 0) {
      result.note = "score below threshold over the whole delta range";
    } else {
      double lo = grid[start - 1];
      double hi = grid[start];
      while (hi - lo > resolution + 1e-12) {
        const double mid = 0.5 * (lo + hi);
        (score(mid) < threshold ? hi : lo) = mid;
      }
      result.delta_c = hi;
    }
    for (const auto& [delta, reports] : cache) {
      result.scores[delta] = reports[m].score;
      result.reports.emplace(delta, reports[m]);
    }
    result.scan_grid = grid;
    results.push_back(std::move(result));
  }
  return results;
}

TransitionResult find_transition(const BondGraph& graph, double gamma, double a, double jalpha,
                                 Measure measure, std::span<const double> delta_grid,
                                 double resolution, const ProtocolConfig& protocol) {
  const Measure one[1] = {measure};
  return find_transitions(graph, gamma, a, jalpha, one, delta_grid, resolution, protocol).front();
}

}  // namespace spinergo
