#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <utility>

#include "nomavlc/phy.hpp"

namespace nomavlc {

struct BisectionOptions {
  /// Search interval is [edge, 1 - edge].
  double edge = 1e-9;
  /// Stop once the bracket is this narrow...
  double bracket_tol = 1e-12;
  /// ...and the two rates agree to this relative gap.
  double rate_gap_tol = 1e-6;
  int max_iters = 200;
};

struct SplitResult {
  PowerSplit split;
  double strong_rate = 0.0;
  double weak_rate = 0.0;
  int iterations = 0;
  bool converged = true;
  /// True when the weak user cannot get a positive rate (zero home gain) or
  /// the pair holds no subcarrier.
  bool degenerate = false;
  double bracket_lo = 0.0;
  double bracket_hi = 1.0;

  double min_rate() const { return std::min(strong_rate, weak_rate); }
};

/// Max-min power split of a pair on its current subcarriers. The strong
/// rate rises and the weak rate falls with a_strong, so the equal-rate point
/// is unique and maximizes the smaller of the two.
inline SplitResult bisect_split(const PairChannel& ch, const BisectionOptions& opt = {}) {
  SplitResult r;
  if (ch.terms.empty()) {
    r.degenerate = true;
    return r;
  }
  if (ch.singleton) {
    r.split = {1.0, 0.0};
    r.strong_rate = strong_rate(ch, 1.0);
    return r;
  }

  bool weak_reachable = false;
  for (const auto& t : ch.terms) weak_reachable |= t.weak_signal > 0.0;
  if (!weak_reachable) {
    r.degenerate = true;
    r.split = {1.0, 0.0};
    r.strong_rate = strong_rate(ch, 1.0);
    return r;
  }

  auto eval = [&](double a) {
    return std::pair{strong_rate(ch, a), weak_rate(ch, a, 1.0 - a)};
  };
  auto finish = [&](double a, std::pair<double, double> rates) {
    r.split = {a, 1.0 - a};
    r.strong_rate = rates.first;
    r.weak_rate = rates.second;
    const double hi = std::max(rates.first, rates.second);
    r.converged = std::abs(rates.first - rates.second) <= opt.rate_gap_tol * hi;
    return r;
  };

  double lo = opt.edge, hi = 1.0 - opt.edge;
  auto rlo = eval(lo), rhi = eval(hi);
  r.bracket_lo = lo;
  r.bracket_hi = hi;
  // Root outside the admissible interval: the edge is the best split.
  if (rlo.first >= rlo.second) return finish(lo, rlo);
  if (rhi.first <= rhi.second) return finish(hi, rhi);

  while (r.iterations < opt.max_iters) {
    const double gap_lo = std::abs(rlo.first - rlo.second) / std::max(rlo.first, rlo.second);
    const double gap_hi = std::abs(rhi.first - rhi.second) / std::max(rhi.first, rhi.second);
    if (hi - lo <= opt.bracket_tol && std::min(gap_lo, gap_hi) <= opt.rate_gap_tol) break;
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    ++r.iterations;
    const auto rm = eval(mid);
    if (rm.first == rm.second) {
      r.bracket_lo = r.bracket_hi = mid;
      return finish(mid, rm);
    }
    if (rm.first < rm.second) {
      lo = mid;
      rlo = rm;
    } else {
      hi = mid;
      rhi = rm;
    }
  }
  r.bracket_lo = lo;
  r.bracket_hi = hi;
  // Both ends straddle the crossing; keep whichever has the larger minimum.
  const bool take_hi = std::min(rhi.first, rhi.second) > std::min(rlo.first, rlo.second);
  finish(take_hi ? hi : lo, take_hi ? rhi : rlo);
  if (r.iterations >= opt.max_iters) r.converged = false;
  return r;
}

inline SplitResult bisect_split(const ChannelMatrix& h, const PairSet& pairs,
                                const AllocationMatrix& x, std::size_t led, std::size_t pair,
                                const LinkBudget& budget, const BisectionOptions& opt = {}) {
  return bisect_split(pair_channel(h, pairs, x, led, pair, budget), opt);
}

}  // namespace nomavlc
