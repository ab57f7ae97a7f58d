#include <map>
#include <sstream>

#include <gtest/gtest.h>

#include "../support/fixtures.hpp"

using namespace nomavlc;

TEST(Score, AllEqualRatesHaveNoPenalty) {
  const std::vector<double> r{2e6, 2e6, 2e6};
  const auto s = score_rates(r, {});
  EXPECT_EQ(s.min_rate, 2e6);
  EXPECT_EQ(s.zero_rate_users, 0u);
  EXPECT_DOUBLE_EQ(s.f_diff, -0.2);
  EXPECT_EQ(s.penalized, s.objective);
  EXPECT_EQ(s.objective, 2e6);
}

TEST(Score, ZeroRateAndSpreadPenalties) {
  const std::vector<double> r{0.0, 1e6};
  const auto s = score_rates(r, {});
  EXPECT_DOUBLE_EQ(s.f_cons, 0.5);
  EXPECT_DOUBLE_EQ(s.f_diff, 0.8);
  EXPECT_DOUBLE_EQ(s.penalized, 0.0 - 1e5 * 0.5 - 10 * 0.8);
}

TEST(Score, AllZeroRates) {
  const std::vector<double> r{0.0, 0.0};
  const auto s = score_rates(r, {});
  EXPECT_EQ(s.f_diff, 0.0);
  EXPECT_DOUBLE_EQ(s.penalized, -1e5);
}

TEST(Score, RateUnitScalesObjectiveOnly) {
  PenaltyParams p;
  p.rate_unit = 1e6;
  const std::vector<double> r{1e6, 2e6};
  const auto s = score_rates(r, p);
  EXPECT_DOUBLE_EQ(s.objective, 1.0);
  EXPECT_DOUBLE_EQ(s.penalized, 1.0 - 10 * 0.3);
}

TEST(Score, PenalizedNeverExceedsObjective) {
  Rng rng(1);
  for (int t = 0; t < 2000; ++t) {
    std::vector<double> r(1 + uniform_index(rng, 10));
    for (auto& v : r) v = uniform01(rng) < 0.1 ? 0.0 : uniform01(rng) * 1e7;
    const auto s = score_rates(r, {});
    const bool inactive = s.zero_rate_users == 0 && s.f_diff <= 0.0;
    EXPECT_LE(s.penalized, s.objective);
    EXPECT_EQ(s.penalized == s.objective, inactive);
    EXPECT_DOUBLE_EQ(s.penalized, oracle::penalized(r, 0.2, 1e5, 10));
  }
}

TEST(Evaluate, MatchesOracleWithReturnedSplits) {
  for (std::uint64_t seed = 1; seed <= 15; ++seed) {
    const auto d = fixtures::drop(seed, 10 + seed, 4, 16);
    Rng rng(seed);
    const auto x = random_solution(d.pairs, 7, rng);
    const auto rep = evaluate(x, d.pairs, d.h, d.budget);
    std::vector<std::vector<double>> a(d.pairs.leds());
    for (std::size_t i = 0; i < d.pairs.leds(); ++i)
      for (std::size_t p = 0; p < d.pairs.pair_count(i); ++p)
        a[i].push_back(rep.splits[d.pairs.flat_index(i, p)].a_strong);
    const auto expect = oracle::rates(fixtures::gains(d.h), fixtures::pairs(d.pairs), fixtures::alloc(x), a,
                                      fixtures::link(), d.h.users());
    for (std::size_t j = 0; j < expect.size(); ++j) EXPECT_NEAR(rep.rates[j], expect[j], 1e-9 * (1 + expect[j]));
    EXPECT_NEAR(rep.penalized(), oracle::penalized(expect, 0.2, 1e5, 10), 1e-6);
    EXPECT_EQ(rep.nonconverged_splits, 0u);
  }
}

TEST(Evaluate, PairMembersGetEqualRates) {
  const auto d = fixtures::drop(3, 20, 4, 16, Scheme::imposed);
  Rng rng(3);
  const auto x = random_solution(d.pairs, 7, rng);
  const auto rep = evaluate(x, d.pairs, d.h, d.budget);
  for (std::size_t i = 0; i < d.pairs.leds(); ++i)
    for (const auto& p : d.pairs.of(i)) {
      const double s = rep.rates[p.strong], w = rep.rates[*p.weak];
      EXPECT_LE(std::abs(s - w), 1e-6 * std::max(s, w));
    }
}

TEST(Evaluate, RejectsMismatchedAllocation) {
  const auto d = fixtures::drop(1);
  EXPECT_THROW(evaluate(AllocationMatrix(4, 6), d.pairs, d.h, d.budget), std::invalid_argument);
  AllocationMatrix x(4, 7);
  x.set(0, 0, 99);
  EXPECT_THROW(evaluate(x, d.pairs, d.h, d.budget), std::invalid_argument);
}

TEST(Evaluate, EmptyAllocationPenalizesEveryone) {
  const auto d = fixtures::drop(2, 8);
  const auto rep = evaluate(AllocationMatrix(4, 7), d.pairs, d.h, d.budget);
  EXPECT_EQ(rep.score.zero_rate_users, 8u);
  EXPECT_DOUBLE_EQ(rep.penalized(), -1e5);
}

TEST(RandomSolution, CellValuesUniform) {
  const PairSet ps(Scheme::not_imposed, {{UserPair{0, 1}}, {UserPair{2, 3}, UserPair{4, 5}, UserPair{6, 7}}});
  Rng rng(9);
  std::map<int, int> led0, led1;
  const int trials = 4000;
  for (int t = 0; t < trials; ++t) {
    const auto x = random_solution(ps, 7, rng);
    ASSERT_TRUE(x.valid_for(ps));
    for (std::size_t k = 0; k < 7; ++k) {
      ++led0[x(0, k)];
      ++led1[x(1, k)];
    }
  }
  const double n = trials * 7.0;
  EXPECT_NEAR(led0[-1] / n, 0.5, 0.02);
  EXPECT_NEAR(led0[0] / n, 0.5, 0.02);
  for (int v = -1; v < 3; ++v) EXPECT_NEAR(led1[v] / n, 0.25, 0.02);
}

TEST(Neighbor, SingleCellChangeSpreadEvenly) {
  const PairSet ps(Scheme::not_imposed, {{UserPair{0, 1}}, {}, {UserPair{2, 3}, UserPair{4, 5}}});
  Rng rng(10);
  const auto x = random_solution(ps, 7, rng);
  std::map<std::size_t, int> by_led, by_k;
  const int trials = 20000;
  for (int t = 0; t < trials; ++t) {
    const auto y = neighbor(x, ps, rng);
    ASSERT_EQ(hamming_distance(x, y), 1u);
    ASSERT_TRUE(y.valid_for(ps));
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t k = 0; k < 7; ++k)
        if (x(i, k) != y(i, k)) {
          ++by_led[i];
          ++by_k[k];
        }
  }
  EXPECT_EQ(by_led[1], 0);
  EXPECT_NEAR(by_led[0] / double(trials), 0.5, 0.03);
  for (std::size_t k = 0; k < 7; ++k) EXPECT_NEAR(by_k[k] / double(trials), 1.0 / 7, 0.03);
}

TEST(Neighbor, NoPairsAnywhereThrows) {
  const PairSet ps(Scheme::not_imposed, {{}, {}});
  Rng rng(1);
  EXPECT_THROW(random_move(AllocationMatrix(2, 3), ps, rng), std::invalid_argument);
}

TEST(Incremental, BitIdenticalToFullEvaluation) {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    const auto d = fixtures::drop(seed, 20, seed % 2 ? 4 : 9, 16, seed % 3 ? Scheme::not_imposed : Scheme::imposed);
    const AllocationProblem problem(d.h, d.pairs, d.budget);
    Rng rng(seed);
    IncrementalObjective inc(problem, random_solution(d.pairs, 7, rng));
    for (int step = 0; step < 300; ++step) {
      const auto m = random_move(inc.solution(), d.pairs, rng);
      auto pr = inc.propose(m);
      AllocationMatrix y = inc.solution();
      y.set(m.led, m.subcarrier, m.value);
      const auto full = problem.evaluate(y);
      ASSERT_EQ(pr.rates, full.rates);
      ASSERT_EQ(pr.score.penalized, full.penalized());
      if (uniform01(rng) < 0.5) inc.commit(std::move(pr));
    }
    const auto full = problem.evaluate(inc.solution());
    EXPECT_EQ(inc.report().rates, full.rates);
    EXPECT_EQ(inc.report().splits, full.splits);
  }
}

TEST(Allocation, Csv) {
  const PairSet ps(Scheme::imposed, {{UserPair{0, 1}}});
  AllocationMatrix x(1, 2);
  x.set(0, 1, 0);
  std::ostringstream os;
  write_allocation_csv(os, x, ps, {{0.25, 0.75}});
  EXPECT_EQ(os.str(), "led,subcarrier,pair,a_s,a_w\n0,0,-1,0,0\n0,1,0,0.25,0.75\n");
}

TEST(AllocationMatrix, FingerprintAndHamming) {
  AllocationMatrix a(2, 3), b(2, 3);
  EXPECT_EQ(a.fingerprint(), b.fingerprint());
  b.set(1, 2, 0);
  EXPECT_NE(a.fingerprint(), b.fingerprint());
  EXPECT_EQ(hamming_distance(a, b), 1u);
  EXPECT_EQ(b.subcarriers_of(1, 0), std::vector<std::size_t>{2});
  EXPECT_EQ(b.used_subcarriers(1), 1u);
  EXPECT_THROW(hamming_distance(a, AllocationMatrix(3, 2)), std::invalid_argument);
}
