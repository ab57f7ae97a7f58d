#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "nomavlc/geometry.hpp"
#include "nomavlc/rng.hpp"

namespace nomavlc {

/// User-to-LED association. Each user is served by exactly one LED.
struct Binding {
  std::vector<std::size_t> assignment;  // user -> LED
  std::size_t led_count = 0;
  /// Users whose gain is zero towards every LED; they stay bound to LED 0.
  std::vector<std::size_t> unreachable;

  std::vector<std::size_t> counts() const {
    std::vector<std::size_t> c(led_count, 0);
    for (auto l : assignment) ++c[l];
    return c;
  }

  std::vector<std::vector<std::size_t>> per_led_users() const {
    std::vector<std::vector<std::size_t>> out(led_count);
    for (std::size_t j = 0; j < assignment.size(); ++j) out[assignment[j]].push_back(j);
    return out;
  }

  std::size_t odd_leds() const {
    std::size_t n = 0;
    for (auto c : counts()) n += c % 2;
    return n;
  }
};

/// Binds every user to its strongest LED; ties go to the lowest LED index.
inline Binding bind_max_gain(const ChannelMatrix& h) {
  if (h.leds() == 0) throw std::invalid_argument("channel matrix has no LED column");
  Binding b;
  b.led_count = h.leds();
  b.assignment.resize(h.users());
  for (std::size_t j = 0; j < h.users(); ++j) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < h.leds(); ++i)
      if (h(j, i) > h(j, best)) best = i;
    if (h(j, best) <= 0.0) b.unreachable.push_back(j);
    b.assignment[j] = best;
  }
  return b;
}

/// Cost of a binding for the even-occupancy repair. Compared
/// lexicographically: parity violations dominate the distance term.
struct ParityCost {
  std::size_t violations = 0;
  double distance_cost = 0.0;

  friend bool operator<(const ParityCost& a, const ParityCost& b) {
    if (a.violations != b.violations) return a.violations < b.violations;
    return a.distance_cost < b.distance_cost;
  }
  friend bool operator==(const ParityCost&, const ParityCost&) = default;
};

/// Per-user distances to every LED, plus the farthest of them.
class DistanceTable {
 public:
  DistanceTable(const Scenario& s) : leds_(s.leds.size()) {
    d_.reserve(s.users.size() * leds_);
    far_.reserve(s.users.size());
    for (const auto& u : s.users) {
      double far = 0.0;
      for (const auto& l : s.leds) {
        d_.push_back(distance(u.position, l.position));
        far = std::max(far, d_.back());
      }
      far_.push_back(far);
    }
  }

  double to_led(std::size_t user, std::size_t led) const { return d_[user * leds_ + led]; }
  double farthest(std::size_t user) const { return far_[user]; }

 private:
  std::size_t leds_;
  std::vector<double> d_;
  std::vector<double> far_;
};

inline ParityCost parity_cost(const Binding& b, const DistanceTable& dist) {
  ParityCost c;
  c.violations = b.odd_leds();
  for (std::size_t j = 0; j < b.assignment.size(); ++j) {
    const double far = dist.farthest(j);
    c.distance_cost += far > 0.0 ? dist.to_led(j, b.assignment[j]) / far : 0.0;
  }
  return c;
}

inline ParityCost parity_cost(const Binding& b, const Scenario& s) {
  return parity_cost(b, DistanceTable(s));
}

struct RepairResult {
  Binding binding;
  std::size_t iterations = 0;
  bool converged = false;
};

/// Iterative greedy repair towards an even user count on every LED. Each
/// step moves one random user to a different random LED and keeps the move
/// unless the cost gets worse. Stops at zero violations or after
/// `max_iters` steps.
inline RepairResult repair_parity(Binding binding, const Scenario& s, Rng& rng,
                                  std::size_t max_iters = 1000) {
  if (binding.assignment.size() % 2 != 0)
    throw std::invalid_argument("even LED occupancy is impossible with an odd user count");
  RepairResult r;
  const DistanceTable dist(s);
  ParityCost current = parity_cost(binding, dist);
  if (current.violations == 0 || binding.led_count < 2) {
    r.converged = current.violations == 0;
    r.binding = std::move(binding);
    return r;
  }

  const auto n = binding.assignment.size();
  const auto leds = binding.led_count;
  while (r.iterations < max_iters) {
    ++r.iterations;
    const auto user = static_cast<std::size_t>(uniform_index(rng, n));
    const auto from = binding.assignment[user];
    auto to = static_cast<std::size_t>(uniform_index(rng, leds - 1));
    if (to >= from) ++to;

    binding.assignment[user] = to;
    const ParityCost candidate = parity_cost(binding, dist);
    if (current < candidate) {
      binding.assignment[user] = from;
    } else {
      current = candidate;
      if (current.violations == 0) break;
    }
  }
  r.converged = current.violations == 0;
  r.binding = std::move(binding);
  return r;
}

inline void write_binding_csv(std::ostream& os, const Binding& b) {
  os << "user_id,led_id\n";
  for (std::size_t j = 0; j < b.assignment.size(); ++j) os << j << ',' << b.assignment[j] << '\n';
}

}  // namespace nomavlc
