#include <gtest/gtest.h>

#include "../support/fixtures.hpp"

using namespace nomavlc;

namespace {

/// Random pair instance with 1..7 subcarriers and optional interference.
PairChannel random_pair(Rng& rng) {
  PairChannel ch;
  ch.subcarrier_bandwidth = 1.25e6;
  const double gs = 1e-6 + 2e-5 * uniform01(rng);
  const double gw = gs * (0.05 + 0.95 * uniform01(rng));
  const auto b = make_link_budget({}, {});
  const auto n = 1 + uniform_index(rng, 7);
  for (std::size_t k = 0; k < n; ++k) {
    SubcarrierTerms t;
    t.subcarrier = k;
    t.strong_signal = gs * gs * b.signal_scale();
    t.weak_signal = gw * gw * b.signal_scale();
    const double i_s = uniform01(rng) < 0.5 ? 0.0 : uniform01(rng) * t.strong_signal;
    const double i_w = uniform01(rng) < 0.5 ? 0.0 : uniform01(rng) * t.weak_signal;
    t.strong_floor = b.noise_term + i_s;
    t.weak_floor = b.noise_term + i_w;
    ch.terms.push_back(t);
  }
  return ch;
}

double oracle_min(const PairChannel& ch, double step, double* arg = nullptr) {
  return oracle::grid_min_rate(
      [&](double a) { return std::pair{strong_rate(ch, a), weak_rate(ch, a, 1 - a)}; }, step, arg);
}

}  // namespace

TEST(Bisection, MatchesCoarseGridOracle) {
  Rng rng(17);
  for (int t = 0; t < 100; ++t) {
    const auto ch = random_pair(rng);
    const auto r = bisect_split(ch);
    EXPECT_TRUE(r.converged);
    EXPECT_FALSE(r.degenerate);
    EXPECT_LE(std::abs(r.strong_rate - r.weak_rate), 1e-6 * std::max(r.strong_rate, r.weak_rate));
    EXPECT_NEAR(r.split.a_strong + r.split.a_weak, 1.0, 1e-15);
    EXPECT_GE(r.min_rate(), oracle_min(ch, 1e-3) - 1e-9);
  }
}

TEST(Bisection, EqualGainsNoInterferenceOneSubcarrier) {
  const auto b = make_link_budget({}, {});
  PairChannel ch;
  ch.subcarrier_bandwidth = b.subcarrier_bandwidth;
  const double g = 1e-5;
  ch.terms.push_back({0, g * g * b.signal_scale(), b.noise_term, g * g * b.signal_scale(), b.noise_term});
  const auto r = bisect_split(ch);
  EXPECT_LT(r.split.a_strong, 0.5);
  double arg = 0;
  oracle_min(ch, 1e-6, &arg);
  EXPECT_NEAR(r.split.a_strong, arg, 1e-5);
}

TEST(Bisection, EmptyPairIsDegenerate) {
  PairChannel ch;
  const auto r = bisect_split(ch);
  EXPECT_TRUE(r.degenerate);
  EXPECT_EQ(r.min_rate(), 0.0);
}

TEST(Bisection, ZeroWeakGainFallsBackToSingleton) {
  Rng rng(3);
  auto ch = random_pair(rng);
  for (auto& t : ch.terms) t.weak_signal = 0.0;
  const auto r = bisect_split(ch);
  EXPECT_TRUE(r.degenerate);
  EXPECT_EQ(r.split, (PowerSplit{1.0, 0.0}));
  EXPECT_EQ(r.weak_rate, 0.0);
  EXPECT_EQ(r.strong_rate, strong_rate(ch, 1.0));
}

TEST(Bisection, SingletonTakesFullPower) {
  Rng rng(4);
  auto ch = random_pair(rng);
  ch.singleton = true;
  const auto r = bisect_split(ch);
  EXPECT_FALSE(r.degenerate);
  EXPECT_EQ(r.split, (PowerSplit{1.0, 0.0}));
}

TEST(Bisection, IterationCapReportsNonConvergence) {
  Rng rng(5);
  const auto ch = random_pair(rng);
  BisectionOptions opt;
  opt.max_iters = 3;
  const auto r = bisect_split(ch, opt);
  EXPECT_EQ(r.iterations, 3);
  EXPECT_FALSE(r.converged);
  EXPECT_LT(r.bracket_lo, r.bracket_hi);
}

TEST(Bisection, EqualRatePointBeatsNeighbours) {
  Rng rng(6);
  for (int t = 0; t < 30; ++t) {
    const auto ch = random_pair(rng);
    const auto r = bisect_split(ch);
    for (double d : {1e-4, 1e-3, 1e-2}) {
      for (double a : {r.split.a_strong - d, r.split.a_strong + d}) {
        if (a <= 0 || a >= 1) continue;
        EXPECT_GE(r.min_rate(), std::min(strong_rate(ch, a), weak_rate(ch, a, 1 - a)) - 1e-9);
      }
    }
  }
}
