#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <numeric>
#include <ostream>
#include <vector>

#include "nomavlc/allocation.hpp"
#include "nomavlc/rng.hpp"

namespace nomavlc {

struct SaParams {
  double t0 = 1.0;
  double alpha = 0.995;      // cooling rate
  double m0 = 50.0;          // Metropolis steps at the first temperature
  double beta = 1.0005;      // growth of the Metropolis step count
  std::size_t outer_iterations = 600;
  double time_limit_s = 0.0;  // 0 disables the wall-clock cap
};

/// Number of objective evaluations SA performs with `p` when no time cap
/// triggers (the initial solution counts as one).
inline std::size_t sa_evaluation_budget(const SaParams& p) {
  std::size_t n = 1;
  double m = p.m0;
  for (std::size_t t = 0; t < p.outer_iterations; ++t, m *= p.beta)
    n += static_cast<std::size_t>(std::ceil(m));
  return n;
}

struct TsParams {
  std::size_t tabu_list_len = 10;
  std::size_t candidate_list_len = 4;
  std::size_t max_evaluations = 35282;  // sa_evaluation_budget(SaParams{})
  /// Steps without a new global best after which the search resumes from
  /// the best solution found (intensification). 0 disables it.
  std::size_t restart_after = 50;
};

struct TracePoint {
  std::size_t evaluation = 0;
  double objective = 0.0;  // penalized objective of the evaluated solution
  double best = 0.0;       // best penalized objective so far
};

struct SearchResult {
  AllocationMatrix best;
  RateReport report;
  std::vector<TracePoint> trace;
  std::size_t evaluations = 0;
};

namespace detail {

class Deadline {
 public:
  explicit Deadline(double seconds)
      : enabled_(seconds > 0.0),
        end_(std::chrono::steady_clock::now() +
             std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                 std::chrono::duration<double>(seconds))) {}
  bool passed() const { return enabled_ && std::chrono::steady_clock::now() >= end_; }

 private:
  bool enabled_;
  std::chrono::steady_clock::time_point end_;
};

inline SearchResult finish(const AllocationProblem& problem, AllocationMatrix best,
                           std::vector<TracePoint> trace, std::size_t evaluations) {
  SearchResult r;
  r.report = problem.evaluate(best);
  r.best = std::move(best);
  r.trace = std::move(trace);
  r.evaluations = evaluations;
  return r;
}

inline bool has_pairs(const PairSet& pairs) { return pairs.total_pairs() > 0; }

}  // namespace detail

/// Simulated annealing over single-cell moves. Each outer step runs a
/// Metropolis loop of ceil(M) proposals at temperature T, then cools
/// T <- alpha T and lengthens M <- beta M. A proposal that beats the global
/// best, or that passes the Metropolis test exp(-dc/T), becomes current.
inline SearchResult simulated_annealing(const AllocationProblem& problem, const SaParams& sa, Rng& rng) {
  IncrementalObjective state(problem, random_solution(problem.pairs(), problem.data_subcarriers(), rng));
  AllocationMatrix best = state.solution();
  double best_cost = state.penalized();
  std::vector<TracePoint> trace{{0, best_cost, best_cost}};
  std::size_t evals = 1;
  if (!detail::has_pairs(problem.pairs()))
    return detail::finish(problem, std::move(best), std::move(trace), evals);

  const detail::Deadline deadline(sa.time_limit_s);
  double temperature = sa.t0;
  double m = sa.m0;
  trace.reserve(sa_evaluation_budget(sa));
  for (std::size_t outer = 0; outer < sa.outer_iterations && !deadline.passed(); ++outer) {
    const auto steps = static_cast<std::size_t>(std::ceil(m));
    for (std::size_t s = 0; s < steps; ++s) {
      auto prop = state.propose(random_move(state.solution(), problem.pairs(), rng));
      ++evals;
      const double c_new = prop.score.penalized;
      const double delta = state.penalized() - c_new;
      const bool improves_best = best_cost < c_new;
      bool accept = improves_best;
      if (improves_best)
        best_cost = c_new;
      else if (temperature > 0.0)
        accept = uniform01(rng) < std::exp(-delta / temperature);
      else
        accept = delta <= 0.0;
      if (accept) {
        state.commit(std::move(prop));
        if (improves_best) best = state.solution();
      }
      trace.push_back({evals - 1, c_new, best_cost});
    }
    temperature *= sa.alpha;
    m *= sa.beta;
  }
  return detail::finish(problem, std::move(best), std::move(trace), evals);
}

/// Tabu search used to cross-check SA. Every step scores
/// `candidate_list_len` random neighbours of the current solution and moves
/// to the best one whose fingerprint is not among the last `tabu_list_len`
/// visited solutions, unless it beats the global best (aspiration).
inline SearchResult tabu_search(const AllocationProblem& problem, const TsParams& ts, Rng& rng) {
  IncrementalObjective state(problem, random_solution(problem.pairs(), problem.data_subcarriers(), rng));
  AllocationMatrix best = state.solution();
  double best_cost = state.penalized();
  std::vector<TracePoint> trace{{0, best_cost, best_cost}};
  std::size_t evals = 1;
  if (!detail::has_pairs(problem.pairs()) || ts.candidate_list_len == 0)
    return detail::finish(problem, std::move(best), std::move(trace), evals);

  std::deque<std::uint64_t> tabu{state.solution().fingerprint()};
  auto is_tabu = [&](std::uint64_t fp) { return std::find(tabu.begin(), tabu.end(), fp) != tabu.end(); };

  std::vector<IncrementalObjective::Proposal> cands;
  std::vector<std::size_t> order;
  std::size_t stale = 0;
  while (evals < ts.max_evaluations) {
    cands.clear();
    const std::size_t n = std::min(ts.candidate_list_len, ts.max_evaluations - evals);
    // The top candidate is always taken when it beats the best, so the
    // running maximum is the best-so-far value.
    double seen = best_cost;
    for (std::size_t c = 0; c < n; ++c) {
      cands.push_back(state.propose(random_move(state.solution(), problem.pairs(), rng)));
      ++evals;
      seen = std::max(seen, cands.back().score.penalized);
      trace.push_back({evals - 1, cands.back().score.penalized, seen});
    }
    order.resize(cands.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return cands[a].score.penalized > cands[b].score.penalized;
    });
    for (auto idx : order) {
      auto& c = cands[idx];
      AllocationMatrix next = state.solution();
      next.set(c.move.led, c.move.subcarrier, c.move.value);
      const auto fp = next.fingerprint();
      const bool aspiration = c.score.penalized > best_cost;
      if (is_tabu(fp) && !aspiration) continue;
      state.commit(std::move(c));
      tabu.push_back(fp);
      while (tabu.size() > ts.tabu_list_len) tabu.pop_front();
      if (aspiration) {
        best_cost = state.penalized();
        best = state.solution();
        stale = 0;
      }
      break;
    }
    if (ts.restart_after > 0 && ++stale > ts.restart_after) {
      state = IncrementalObjective(problem, best);
      stale = 0;
    }
  }
  return detail::finish(problem, std::move(best), std::move(trace), evals);
}

inline void write_trace_csv(std::ostream& os, const std::vector<TracePoint>& trace) {
  os << "iteration,objective,best_objective\n";
  for (const auto& t : trace) os << t.evaluation << ',' << t.objective << ',' << t.best << '\n';
}

}  // namespace nomavlc
