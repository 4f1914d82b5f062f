#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "spinergo/ergodicity.hpp"
#include "spinergo/errors.hpp"

using namespace spinergo;

namespace {

TimeSeries sampled(double t_max, double step, double t_large, const std::function<double(double)>& f) {
  TimeSeries s;
  s.times = time_grid(0.0, t_max, step);
  for (double t : s.times) s.values.push_back(f(t));
  s.t_large = t_large;
  return s;
}

// Cheap protocol for small lattices.
ProtocolConfig quick_protocol() {
  ProtocolConfig p;
  p.time.t_max = 60.0;
  p.time.t_large = 30.0;
  p.time.window = 30.0;
  p.beta.points = 12;
  return p;
}

}  // namespace

TEST(Ergodicity, TimeGrid) {
  const auto g = time_grid(0.0, 200.0, 0.1);
  ASSERT_EQ(g.size(), 2001u);
  EXPECT_DOUBLE_EQ(g.back(), 200.0);
  EXPECT_NEAR(g[1000], 100.0, 1e-12);
  for (std::size_t k = 1; k < g.size(); ++k) EXPECT_GT(g[k], g[k - 1]);
}

TEST(Ergodicity, AverageOfConstant) {
  const auto s = sampled(200, 0.1, 100, [](double) { return 0.37; });
  EXPECT_NEAR(time_average(s, 100), 0.37, 1e-14);
  EXPECT_EQ(classify_fluctuations(s.times, s.values, 100, 100, 1e-6), FluctuationCase::Flat);
}

TEST(Ergodicity, AverageOfCosineOverWholePeriods) {
  // Period 2 pi / omega = 10, so the window [100, 200] holds ten periods.
  const double omega = 2 * std::numbers::pi / 10.0;
  const auto s = sampled(200, 0.1, 100, [&](double t) { return std::cos(omega * t); });
  EXPECT_NEAR(time_average(s, 100), 0.0, 1e-6);
  EXPECT_EQ(classify_fluctuations(s.times, s.values, 100, 100, 1e-6), FluctuationCase::Oscillating);
  const auto tiny = sampled(200, 0.1, 100, [&](double t) { return 1.0 + 1e-9 * std::cos(omega * t); });
  EXPECT_EQ(classify_fluctuations(tiny.times, tiny.values, 100, 100, 1e-6), FluctuationCase::BelowPrecision);
}

TEST(Ergodicity, WindowErrors) {
  const auto s = sampled(150, 0.1, 100, [](double) { return 1.0; });
  EXPECT_THROW(time_average(s, 100), InvalidWindow);
  EXPECT_THROW(time_average(s, 0.0), InvalidWindow);
  auto shifted = s;
  shifted.t_large = 100.05;  // not on the grid
  EXPECT_THROW(time_average(shifted, 10), InvalidWindow);
}

TEST(Ergodicity, StationaryStateAverage) {
  // a = 0: the initial state is already canonical for the final Hamiltonian.
  const QuenchSetup setup(build_ring(6), 0.8, 0.2, PairSelector::Auto);
  const auto times = time_grid(0.0, 40.0, 0.1);
  const auto states = evolved_pair_states(setup, 0.0, 5.0, times, quick_protocol());
  const double v0 = evaluate(Measure::Discord, states.front()).value;
  TimeSeries s;
  s.times = times;
  for (const auto& rho : states) s.values.push_back(evaluate(Measure::Discord, rho).value);
  s.t_large = 20.0;
  EXPECT_NEAR(time_average(s, 20.0), v0, 1e-9);
}

TEST(Ergodicity, BetaGrid) {
  const auto grid = BetaGrid{}.values(20.0);
  EXPECT_EQ(grid.size(), 42u);  // 40 log points plus both anchors
  EXPECT_NEAR(grid.front(), 2.0, 1e-12);
  EXPECT_NEAR(grid.back(), 200.0, 1e-9);
  EXPECT_TRUE(std::find(grid.begin(), grid.end(), 60.0) != grid.end());
  for (std::size_t k = 1; k < grid.size(); ++k) EXPECT_GT(grid[k], grid[k - 1]);
}

TEST(Ergodicity, CanonicalMaxTieKeepsFirstPoint) {
  // High temperatures: the state is separable, entanglement is zero everywhere.
  const auto h = spectral_decompose(build_hamiltonian(build_ring(4), {0.8, 0.2, 0.0, 1.0}));
  const std::vector<double> betas = {0.01, 0.02, 0.03};
  const auto m = canonical_max(Measure::LogNegativity, h, {0, 1}, betas);
  EXPECT_EQ(m.value, 0.0);
  EXPECT_EQ(m.argmax_beta, 0.01);
}

TEST(Ergodicity, ScoreIsClampedDifference) {
  const auto report = ergodicity_score(build_ring(6), {0.8, 0.2, 0.6, 1.0}, 20.0, Measure::Discord,
                                       quick_protocol());
  EXPECT_GE(report.score, 0.0);
  EXPECT_EQ(report.score, std::max(0.0, report.q_time_avg - report.q_can_max));
  EXPECT_EQ(report.beta_grid_used, quick_protocol().beta.values(20.0));
  EXPECT_EQ(report.geometry, "ring");
  EXPECT_LE(report.discarded_weight, 1e-12);
}

TEST(Ergodicity, TimeGridRefinement) {
  const QuenchSetup setup(build_ring(6), 0.8, 0.2, PairSelector::Auto);
  const std::vector<Measure> measures = {Measure::Discord, Measure::WorkDeficit, Measure::Concurrence};
  ProtocolConfig coarse = quick_protocol();
  coarse.time.t_max = 200.0;
  coarse.time.t_large = 100.0;
  coarse.time.window = 100.0;
  ProtocolConfig fine = coarse;
  fine.time.t_step = 0.025;
  const auto a = ergodicity_scores(setup, 0.6, 20.0, measures, coarse);
  const auto b = ergodicity_scores(setup, 0.6, 20.0, measures, fine);
  for (std::size_t k = 0; k < measures.size(); ++k) {
    EXPECT_NEAR(a[k].score, b[k].score, 1e-3) << to_string(measures[k]);
    EXPECT_NEAR(a[k].q_time_avg, b[k].q_time_avg, 1e-3) << to_string(measures[k]);
  }
}

TEST(Ergodicity, TransitionSearchRule) {
  const BondGraph ring = build_ring(6);
  const std::vector<double> grid = {0.0, 0.3, 0.6, 0.9, 1.2};
  const auto result = find_transition(ring, 0.8, 0.6, 20.0, Measure::Discord, grid, 0.05, quick_protocol());
  const double thr = quick_protocol().zero_threshold;
  if (result.delta_c) {
    // Every evaluated delta at or beyond delta_c is ergodic; the next point below is not.
    for (const auto& [d, s] : result.scores)
      if (d >= *result.delta_c - 1e-12) EXPECT_LT(s, thr) << d;
    double below = -1.0;
    for (const auto& [d, s] : result.scores)
      if (d < *result.delta_c - 1e-12) below = d;
    if (below >= 0.0) {
      EXPECT_GE(result.scores.at(below), thr);
      EXPECT_LE(*result.delta_c - below, 0.05 + 1e-12);
    }
  } else {
    EXPECT_FALSE(result.note.empty());
  }
  // Entanglement is ergodic everywhere: no crossing, reported as not found.
  const auto ln = find_transition(ring, 0.8, 0.6, 20.0, Measure::LogNegativity, grid, 0.05, quick_protocol());
  EXPECT_FALSE(ln.delta_c.has_value());
  EXPECT_FALSE(ln.note.empty());
  EXPECT_EQ(ln.scores.size(), grid.size());
}

TEST(Ergodicity, EntanglementIsErgodicOnSmallRing) {
  const QuenchSetup setup(build_ring(6), 0.8, 0.2, PairSelector::Auto);
  const std::vector<Measure> measures = {Measure::LogNegativity, Measure::Concurrence};
  for (const auto& r : ergodicity_scores(setup, 0.6, 20.0, measures, quick_protocol()))
    EXPECT_LE(r.score, 1e-4) << to_string(r.measure);
}

// Equilibrium discord on the N=8 ring at gamma=0.8 grows with J beta and
// saturates, so the canonical maximum sits at the top of the grid.
TEST(Ergodicity, RingCanonicalMaximumAtGridTop) {
  const auto grid = BetaGrid{}.values(20.0);
  for (double delta : {0.2, 0.5, 0.8, 1.2}) {
    const auto h = spectral_decompose(build_hamiltonian(build_ring(8), {0.8, delta, 0.0, 1.0}));
    const auto m = canonical_max(Measure::Discord, h, {0, 1}, grid);
    EXPECT_NEAR(m.argmax_beta, grid.back(), 1e-9) << "delta " << delta << " max " << m.value;
  }
}

// Ladder anchor: the discord at J beta = 60 is within 5% of the grid maximum.
TEST(Ergodicity, LadderCanonicalMaximumNearAnchor) {
  const auto grid = BetaGrid{}.values(20.0);
  for (double gamma : {0.2, 0.8})
    for (double delta : {0.2, 0.5, 0.8, 1.2}) {
      const auto h = spectral_decompose(build_hamiltonian(build_ladder(4), {gamma, delta, 0.0, 1.0}));
      const ThermalPairStates thermal(h, 0, 1);
      const auto m = canonical_max(Measure::Discord, thermal, grid);
      const double at_anchor = evaluate(Measure::Discord, thermal.at(60.0)).value;
      EXPECT_GE(at_anchor, 0.95 * m.value) << "gamma " << gamma << " delta " << delta;
    }
}
