#pragma once

#include <algorithm>
#include <cstddef>
#include <ostream>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "nomavlc/allocation_matrix.hpp"
#include "nomavlc/phy.hpp"
#include "nomavlc/power_split.hpp"
#include "nomavlc/rng.hpp"

namespace nomavlc {

/// Weights folding the fairness and coverage constraints into the
/// objective. Rates enter the objective in units of `rate_unit` bit/s, so
/// with the default the objective equals the minimum rate in bit/s.
struct PenaltyParams {
  double spread_limit = 0.2;  // allowed (max - min) / max
  double p1 = 1.0e5;          // zero-rate users
  double p2 = 10.0;           // spread above the limit
  double rate_unit = 1.0;
};

/// Objective terms derived from a rate vector.
struct Score {
  double min_rate = 0.0;  // bit/s
  double max_rate = 0.0;  // bit/s
  std::size_t zero_rate_users = 0;
  double f_cons = 0.0;
  double f_diff = 0.0;
  double objective = 0.0;  // min rate in objective units
  double penalized = 0.0;  // objective minus active penalties
};

inline Score score_rates(std::span<const double> rates, const PenaltyParams& pen) {
  Score s;
  if (rates.empty()) return s;
  s.min_rate = rates[0];
  s.max_rate = rates[0];
  for (double r : rates) {
    s.min_rate = std::min(s.min_rate, r);
    s.max_rate = std::max(s.max_rate, r);
    s.zero_rate_users += r == 0.0;
  }
  s.f_cons = static_cast<double>(s.zero_rate_users) / static_cast<double>(rates.size());
  s.f_diff = s.max_rate > 0.0 ? (s.max_rate - s.min_rate) / s.max_rate - pen.spread_limit : 0.0;
  s.objective = s.min_rate / pen.rate_unit;
  s.penalized = s.objective - pen.p1 * s.f_cons - pen.p2 * std::max(0.0, s.f_diff);
  return s;
}

struct RateReport {
  std::vector<double> rates;         // per user, bit/s
  std::vector<PowerSplit> splits;    // per pair, flat index
  Score score;
  std::size_t nonconverged_splits = 0;

  double min_rate() const { return score.min_rate; }
  double max_rate() const { return score.max_rate; }
  double objective() const { return score.objective; }
  double penalized() const { return score.penalized; }
};

struct PairOutcome {
  PowerSplit split;
  double strong_rate = 0.0;
  double weak_rate = 0.0;
  bool converged = true;
};

/// Immutable context for scoring allocations of one realization.
class AllocationProblem {
 public:
  AllocationProblem(ChannelMatrix h, PairSet pairs, LinkBudget budget, PenaltyParams penalty = {},
                    BisectionOptions bisection = {})
      : h_(std::move(h)),
        pairs_(std::move(pairs)),
        budget_(budget),
        penalty_(penalty),
        bisection_(bisection) {
    if (pairs_.leds() != h_.leds()) throw std::invalid_argument("pair set and channel disagree on LED count");
  }

  const ChannelMatrix& channel() const { return h_; }
  const PairSet& pairs() const { return pairs_; }
  const LinkBudget& budget() const { return budget_; }
  const PenaltyParams& penalty() const { return penalty_; }
  std::size_t leds() const { return pairs_.leds(); }
  std::size_t data_subcarriers() const { return budget_.data_subcarriers; }
  std::size_t users() const { return h_.users(); }

  AllocationMatrix empty_allocation() const { return AllocationMatrix(leds(), data_subcarriers()); }

  PairOutcome evaluate_pair(const AllocationMatrix& x, std::size_t led, std::size_t pair) const {
    const auto res = bisect_split(pair_channel(h_, pairs_, x, led, pair, budget_), bisection_);
    return {res.split, res.strong_rate, res.weak_rate, res.converged};
  }

  void scatter(const UserPair& p, const PairOutcome& o, std::vector<double>& rates) const {
    rates[p.strong] = o.strong_rate;
    if (p.weak) rates[*p.weak] = o.weak_rate;
  }

  RateReport evaluate(const AllocationMatrix& x) const {
    if (x.leds() != leds() || x.subcarriers() != data_subcarriers() || !x.valid_for(pairs_))
      throw std::invalid_argument("allocation does not match the pair set");
    RateReport rep;
    rep.rates.assign(users(), 0.0);
    rep.splits.resize(pairs_.total_pairs());
    for (std::size_t i = 0; i < leds(); ++i)
      for (std::size_t p = 0; p < pairs_.pair_count(i); ++p) {
        const auto o = evaluate_pair(x, i, p);
        rep.splits[pairs_.flat_index(i, p)] = o.split;
        rep.nonconverged_splits += !o.converged;
        scatter(pairs_.at(i, p), o, rep.rates);
      }
    rep.score = score_rates(rep.rates, penalty_);
    return rep;
  }

 private:
  ChannelMatrix h_;
  PairSet pairs_;
  LinkBudget budget_;
  PenaltyParams penalty_;
  BisectionOptions bisection_;
};

inline RateReport evaluate(const AllocationMatrix& x, const PairSet& pairs, const ChannelMatrix& h,
                           const LinkBudget& budget, const PenaltyParams& penalty = {}) {
  return AllocationProblem(h, pairs, budget, penalty).evaluate(x);
}

/// Each cell uniform over {unassigned} and the local pair indices.
inline AllocationMatrix random_solution(const PairSet& pairs, std::size_t data_subcarriers, Rng& rng) {
  AllocationMatrix x(pairs.leds(), data_subcarriers);
  for (std::size_t i = 0; i < pairs.leds(); ++i) {
    const std::size_t options = pairs.pair_count(i) + 1;
    for (std::size_t k = 0; k < data_subcarriers; ++k)
      x.set(i, k, static_cast<int>(uniform_index(rng, options)) - 1);
  }
  return x;
}

struct CellMove {
  std::size_t led = 0;
  std::size_t subcarrier = 0;
  int value = AllocationMatrix::unassigned;
};

/// Picks a random cell on an LED that has pairs and a new value for it,
/// uniform over the alternatives to the current one.
inline CellMove random_move(const AllocationMatrix& x, const PairSet& pairs, Rng& rng) {
  std::size_t eligible = 0;
  for (std::size_t i = 0; i < pairs.leds(); ++i) eligible += pairs.pair_count(i) > 0;
  if (eligible == 0) throw std::invalid_argument("no LED has a pair to reassign");
  auto pick = uniform_index(rng, eligible);
  std::size_t led = 0;
  for (;; ++led)
    if (pairs.pair_count(led) > 0 && pick-- == 0) break;

  CellMove m;
  m.led = led;
  m.subcarrier = static_cast<std::size_t>(uniform_index(rng, x.subcarriers()));
  // Values are encoded as 0..P with 0 meaning unassigned; skip the current one.
  const auto current = static_cast<std::uint64_t>(x(led, m.subcarrier) + 1);
  auto v = uniform_index(rng, pairs.pair_count(led));
  if (v >= current) ++v;
  m.value = static_cast<int>(v) - 1;
  return m;
}

inline AllocationMatrix neighbor(const AllocationMatrix& x, const PairSet& pairs, Rng& rng) {
  const auto m = random_move(x, pairs, rng);
  AllocationMatrix y = x;
  y.set(m.led, m.subcarrier, m.value);
  return y;
}

/// Tracks per-pair outcomes of a current allocation so a single-cell move is
/// rescored by recomputing only the pairs it touches: the old and new
/// occupant of the cell, and, if the cell's occupancy flips, the occupants
/// of that subcarrier on the other LEDs. Scores are bit-identical to a full
/// `AllocationProblem::evaluate`.
class IncrementalObjective {
 public:
  struct Proposal {
    CellMove move;
    std::vector<std::pair<std::size_t, PairOutcome>> changed;  // (flat pair, outcome)
    std::vector<double> rates;
    Score score;
  };

  IncrementalObjective(const AllocationProblem& problem, AllocationMatrix initial)
      : problem_(&problem), x_(std::move(initial)) {
    const auto rep = problem.evaluate(x_);
    rates_ = rep.rates;
    score_ = rep.score;
    outcomes_.resize(problem.pairs().total_pairs());
    for (std::size_t i = 0; i < problem.leds(); ++i)
      for (std::size_t p = 0; p < problem.pairs().pair_count(i); ++p)
        outcomes_[problem.pairs().flat_index(i, p)] = problem.evaluate_pair(x_, i, p);
  }

  const AllocationMatrix& solution() const { return x_; }
  const Score& score() const { return score_; }
  double penalized() const { return score_.penalized; }

  Proposal propose(const CellMove& m) {
    const auto& pairs = problem_->pairs();
    Proposal pr;
    pr.move = m;
    const int old = x_(m.led, m.subcarrier);
    x_.set(m.led, m.subcarrier, m.value);

    auto touch = [&](std::size_t led, int v) {
      if (v < 0) return;
      const auto p = static_cast<std::size_t>(v);
      pr.changed.emplace_back(pairs.flat_index(led, p), problem_->evaluate_pair(x_, led, p));
    };
    touch(m.led, old);
    touch(m.led, m.value);
    if ((old < 0) != (m.value < 0)) {
      for (std::size_t i = 0; i < x_.leds(); ++i)
        if (i != m.led) touch(i, x_(i, m.subcarrier));
    }
    x_.set(m.led, m.subcarrier, old);

    pr.rates = rates_;
    for (const auto& [flat, o] : pr.changed) {
      const auto [led, p] = locate(flat);
      problem_->scatter(pairs.at(led, p), o, pr.rates);
    }
    pr.score = score_rates(pr.rates, problem_->penalty());
    return pr;
  }

  void commit(Proposal&& pr) {
    x_.set(pr.move.led, pr.move.subcarrier, pr.move.value);
    for (const auto& [flat, o] : pr.changed) outcomes_[flat] = o;
    rates_ = std::move(pr.rates);
    score_ = pr.score;
  }

  RateReport report() const {
    RateReport rep;
    rep.rates = rates_;
    rep.score = score_;
    rep.splits.reserve(outcomes_.size());
    for (const auto& o : outcomes_) {
      rep.splits.push_back(o.split);
      rep.nonconverged_splits += !o.converged;
    }
    return rep;
  }

 private:
  std::pair<std::size_t, std::size_t> locate(std::size_t flat) const {
    const auto& pairs = problem_->pairs();
    std::size_t led = 0;
    while (flat >= pairs.flat_index(led, 0) + pairs.pair_count(led)) ++led;
    return {led, flat - pairs.flat_index(led, 0)};
  }

  const AllocationProblem* problem_;
  AllocationMatrix x_;
  std::vector<double> rates_;
  std::vector<PairOutcome> outcomes_;
  Score score_;
};

/// Final allocation table: one row per (LED, data subcarrier).
inline void write_allocation_csv(std::ostream& os, const AllocationMatrix& x, const PairSet& pairs,
                                 const std::vector<PowerSplit>& splits) {
  os << "led,subcarrier,pair,a_s,a_w\n";
  for (std::size_t i = 0; i < x.leds(); ++i)
    for (std::size_t k = 0; k < x.subcarriers(); ++k) {
      const int v = x(i, k);
      os << i << ',' << k << ',' << v << ',';
      if (v >= 0) {
        const auto& s = splits.at(pairs.flat_index(i, static_cast<std::size_t>(v)));
        os << s.a_strong << ',' << s.a_weak;
      } else {
        os << 0 << ',' << 0;
      }
      os << '\n';
    }
}

}  // namespace nomavlc
