#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "nomavlc/allocation_matrix.hpp"
#include "nomavlc/geometry.hpp"
#include "nomavlc/pairing.hpp"

namespace nomavlc {

inline double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

struct PowerConfig {
  double electrical_power_dbm = 35.0;
  /// Ratio between optical output and the square root of electrical power.
  double electrical_to_optical_ratio = 3.2;
  /// Photodiode responsivity, A/W.
  double oe_efficiency = 0.53;

  double electrical_watts() const { return dbm_to_watts(electrical_power_dbm); }
  double optical_power() const { return electrical_to_optical_ratio * std::sqrt(electrical_watts()); }
};

struct NoiseConfig {
  double psd = 1.0e-19;        // A^2/Hz, thermal plus ambient shot noise
  double bandwidth = 20.0e6;   // Hz
  std::size_t subcarriers = 16;

  void validate() const {
    if (subcarriers < 4 || subcarriers % 2 != 0)
      throw std::invalid_argument("subcarrier count must be even and at least 4, got " +
                                  std::to_string(subcarriers));
    if (!(psd > 0.0 && bandwidth > 0.0))
      throw std::invalid_argument("noise PSD and bandwidth must be positive");
  }
};

inline double noise_variance(const NoiseConfig& cfg) {
  return cfg.psd * cfg.bandwidth / static_cast<double>(cfg.subcarriers);
}

/// DCO-OFDM layout: Hermitian symmetry and the DC bin leave K/2 - 1 data
/// subcarriers, and the optical power is spread over K - 2 of them.
struct SubcarrierPlan {
  std::size_t total_subcarriers = 16;
  std::size_t data_subcarriers = 7;
  double per_subcarrier_optical_power = 0.0;

  static SubcarrierPlan make(std::size_t total, double optical_power) {
    if (total < 4 || total % 2 != 0)
      throw std::invalid_argument("subcarrier count must be even and at least 4");
    return {total, total / 2 - 1, optical_power / static_cast<double>(total - 2)};
  }
};

/// Constants entering the per-subcarrier SINR expressions.
struct LinkBudget {
  double per_subcarrier_power = 0.0;  // P_o / (K - 2)
  double oe_efficiency = 0.53;
  double noise_term = 0.0;            // iota^2 * sigma_k^2
  double subcarrier_bandwidth = 0.0;  // B / K
  std::size_t data_subcarriers = 0;

  /// kappa^2 * P_{o,k}^2; multiplies a squared channel gain.
  double signal_scale() const {
    const double kp = oe_efficiency * per_subcarrier_power;
    return kp * kp;
  }
};

inline LinkBudget make_link_budget(const PowerConfig& power, const NoiseConfig& noise) {
  noise.validate();
  if (!(power.electrical_to_optical_ratio > 0.0 && power.oe_efficiency > 0.0))
    throw std::invalid_argument("conversion ratios must be positive");
  const auto plan = SubcarrierPlan::make(noise.subcarriers, power.optical_power());
  const double iota = power.electrical_to_optical_ratio;
  LinkBudget b;
  b.per_subcarrier_power = plan.per_subcarrier_optical_power;
  b.oe_efficiency = power.oe_efficiency;
  b.noise_term = iota * iota * noise_variance(noise);
  b.subcarrier_bandwidth = noise.bandwidth / static_cast<double>(noise.subcarriers);
  b.data_subcarriers = plan.data_subcarriers;
  return b;
}

/// Intra-pair power fractions. Singletons carry (1, 0).
struct PowerSplit {
  double a_strong = 0.0;
  double a_weak = 0.0;

  friend bool operator==(const PowerSplit&, const PowerSplit&) = default;
};

/// e / (2 pi): gap of the capacity lower bound for intensity modulation.
inline constexpr double kCapacityGap = std::numbers::e / (2.0 * std::numbers::pi);

/// SINR ingredients of one pair on one of its subcarriers. `*_floor` holds
/// inter-LED interference plus noise; the weak user additionally sees
/// `strong_signal * a_strong` as residual intra-pair interference.
struct SubcarrierTerms {
  std::size_t subcarrier = 0;
  double strong_signal = 0.0;
  double strong_floor = 0.0;
  double weak_signal = 0.0;
  double weak_floor = 0.0;
};

/// Everything needed to evaluate a pair's rates for any power split.
struct PairChannel {
  std::vector<SubcarrierTerms> terms;
  double subcarrier_bandwidth = 0.0;
  bool singleton = false;
};

/// Inter-LED interference at `user` on subcarrier k: every other LED that
/// has the subcarrier occupied contributes h^2 kappa^2 P_{o,k}^2.
inline double inter_led_interference(const ChannelMatrix& h, const AllocationMatrix& x,
                                     std::size_t home, std::size_t k, std::size_t user,
                                     double signal_scale) {
  double sum = 0.0;
  for (std::size_t i = 0; i < x.leds(); ++i) {
    if (i == home || !x.occupied(i, k)) continue;
    const double g = h(user, i);
    sum += g * g * signal_scale;
  }
  return sum;
}

inline PairChannel pair_channel(const ChannelMatrix& h, const PairSet& pairs,
                                const AllocationMatrix& x, std::size_t led, std::size_t pair,
                                const LinkBudget& budget) {
  if (led >= pairs.leds() || pair >= pairs.pair_count(led))
    throw std::out_of_range("pair index out of range");
  const UserPair& p = pairs.at(led, pair);
  const double scale = budget.signal_scale();
  const double gs = h(p.strong, led);
  const double gw = p.weak ? h(*p.weak, led) : 0.0;

  PairChannel ch;
  ch.subcarrier_bandwidth = budget.subcarrier_bandwidth;
  ch.singleton = p.singleton();
  for (std::size_t k = 0; k < x.subcarriers(); ++k) {
    if (x(led, k) != static_cast<int>(pair)) continue;
    SubcarrierTerms t;
    t.subcarrier = k;
    t.strong_signal = gs * gs * scale;
    t.strong_floor = inter_led_interference(h, x, led, k, p.strong, scale) + budget.noise_term;
    if (p.weak) {
      t.weak_signal = gw * gw * scale;
      t.weak_floor = inter_led_interference(h, x, led, k, *p.weak, scale) + budget.noise_term;
    }
    ch.terms.push_back(t);
  }
  return ch;
}

inline double strong_sinr(const SubcarrierTerms& t, double a_strong) {
  return kCapacityGap * a_strong * t.strong_signal / t.strong_floor;
}

inline double weak_sinr(const SubcarrierTerms& t, double a_strong, double a_weak) {
  return kCapacityGap * a_weak * t.weak_signal / (t.weak_floor + a_strong * t.strong_signal);
}

/// Rate of the strong (SIC) user, bit/s.
inline double strong_rate(const PairChannel& ch, double a_strong) {
  double bits = 0.0;
  for (const auto& t : ch.terms) bits += std::log1p(strong_sinr(t, a_strong));
  return ch.subcarrier_bandwidth * bits / std::numbers::ln2;
}

/// Rate of the weak user, bit/s.
inline double weak_rate(const PairChannel& ch, double a_strong, double a_weak) {
  double bits = 0.0;
  for (const auto& t : ch.terms) bits += std::log1p(weak_sinr(t, a_strong, a_weak));
  return ch.subcarrier_bandwidth * bits / std::numbers::ln2;
}

struct PairRates {
  double strong = 0.0;
  double weak = 0.0;
};

inline void check_split(const PowerSplit& s) {
  if (!(s.a_strong >= 0.0 && s.a_weak >= 0.0 && s.a_strong + s.a_weak <= 1.0 + 1e-12))
    throw std::invalid_argument("invalid power split");
}

inline PairRates pair_rates(const ChannelMatrix& h, const PairSet& pairs,
                            const AllocationMatrix& x, std::size_t led, std::size_t pair,
                            const PowerSplit& split, const LinkBudget& budget) {
  check_split(split);
  const PairChannel ch = pair_channel(h, pairs, x, led, pair, budget);
  PairRates r;
  r.strong = strong_rate(ch, split.a_strong);
  if (!ch.singleton) r.weak = weak_rate(ch, split.a_strong, split.a_weak);
  return r;
}

/// Rate of a user served alone: the strong-user expression at full power.
inline double singleton_rate(const ChannelMatrix& h, const PairSet& pairs,
                             const AllocationMatrix& x, std::size_t led, std::size_t pair,
                             const LinkBudget& budget) {
  const PairChannel ch = pair_channel(h, pairs, x, led, pair, budget);
  if (!ch.singleton) throw std::invalid_argument("singleton_rate called on a two-user pair");
  return strong_rate(ch, 1.0);
}

/// Per-subcarrier SINR dump for every pair, one row per (pair, subcarrier).
inline void write_sinr_csv(std::ostream& os, const ChannelMatrix& h, const PairSet& pairs,
                           const AllocationMatrix& x, const std::vector<PowerSplit>& splits,
                           const LinkBudget& budget) {
  os << "led,pair,subcarrier,a_s,a_w,sinr_strong,sinr_weak\n";
  for (std::size_t i = 0; i < pairs.leds(); ++i)
    for (std::size_t p = 0; p < pairs.pair_count(i); ++p) {
      const auto ch = pair_channel(h, pairs, x, i, p, budget);
      const auto& s = splits.at(pairs.flat_index(i, p));
      for (const auto& t : ch.terms) {
        os << i << ',' << p << ',' << t.subcarrier << ',' << s.a_strong << ',' << s.a_weak << ','
           << strong_sinr(t, s.a_strong) << ',';
        if (ch.singleton)
          os << 0;
        else
          os << weak_sinr(t, s.a_strong, s.a_weak);
        os << '\n';
      }
    }
}

}  // namespace nomavlc
