#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "nomavlc/association.hpp"
#include "nomavlc/geometry.hpp"

namespace nomavlc {

/// Whether every LED must carry an even number of users (all users paired)
/// or a lone user may hold subcarriers by itself.
enum class Scheme { imposed, not_imposed };

inline std::string_view to_string(Scheme s) {
  return s == Scheme::imposed ? "imposed" : "not-imposed";
}

inline Scheme parse_scheme(std::string_view s) {
  if (s == "imposed") return Scheme::imposed;
  if (s == "not-imposed") return Scheme::not_imposed;
  throw std::invalid_argument("unknown scheme '" + std::string(s) + "'");
}

/// Strong/weak pair sharing subcarriers of one LED. A pair without a weak
/// member is a singleton served alone.
struct UserPair {
  std::size_t strong = 0;
  std::optional<std::size_t> weak;

  bool singleton() const { return !weak.has_value(); }
};

class PairSet {
 public:
  PairSet() = default;
  PairSet(Scheme scheme, std::vector<std::vector<UserPair>> per_led)
      : scheme_(scheme), per_led_(std::move(per_led)) {
    offsets_.reserve(per_led_.size() + 1);
    offsets_.push_back(0);
    for (const auto& v : per_led_) offsets_.push_back(offsets_.back() + v.size());
  }

  Scheme scheme() const { return scheme_; }
  std::size_t leds() const { return per_led_.size(); }
  std::size_t pair_count(std::size_t led) const { return per_led_[led].size(); }
  std::size_t total_pairs() const { return offsets_.empty() ? 0 : offsets_.back(); }
  /// Position of (led, pair) in a flat enumeration of all pairs.
  std::size_t flat_index(std::size_t led, std::size_t pair) const { return offsets_[led] + pair; }
  const UserPair& at(std::size_t led, std::size_t pair) const { return per_led_[led].at(pair); }
  const std::vector<UserPair>& of(std::size_t led) const { return per_led_[led]; }

  std::size_t user_count() const {
    std::size_t n = 0;
    for (const auto& v : per_led_)
      for (const auto& p : v) n += p.singleton() ? 1 : 2;
    return n;
  }

 private:
  Scheme scheme_ = Scheme::not_imposed;
  std::vector<std::vector<UserPair>> per_led_;
  std::vector<std::size_t> offsets_;
};

/// Divide-and-next-largest-difference pairing. Users of each LED are sorted
/// by home gain (descending, ties by user index); the j-th strongest is
/// paired with the j-th member of the weaker half. With an odd count the
/// weakest user becomes a singleton.
inline PairSet d_nlupa(const Binding& binding, const ChannelMatrix& h, Scheme scheme) {
  std::vector<std::vector<UserPair>> per_led(binding.led_count);
  auto users = binding.per_led_users();
  for (std::size_t led = 0; led < binding.led_count; ++led) {
    auto& u = users[led];
    if (u.size() % 2 != 0 && scheme == Scheme::imposed)
      throw std::invalid_argument("odd user count on LED " + std::to_string(led) +
                                  " under the imposed scheme");
    std::sort(u.begin(), u.end(), [&](std::size_t a, std::size_t b) {
      const double ga = h(a, led), gb = h(b, led);
      return ga != gb ? ga > gb : a < b;
    });
    const std::size_t half = u.size() / 2;
    auto& pairs = per_led[led];
    for (std::size_t j = 0; j < half; ++j) pairs.push_back({u[j], u[j + half]});
    if (u.size() % 2 != 0) pairs.push_back({u.back(), std::nullopt});
  }
  return PairSet(scheme, std::move(per_led));
}

inline void write_pairs_csv(std::ostream& os, const PairSet& ps) {
  os << "led_id,pair_idx,strong_user,weak_user\n";
  for (std::size_t i = 0; i < ps.leds(); ++i)
    for (std::size_t p = 0; p < ps.pair_count(i); ++p) {
      const auto& pr = ps.at(i, p);
      os << i << ',' << p << ',' << pr.strong << ',';
      if (pr.weak)
        os << *pr.weak;
      else
        os << -1;
      os << '\n';
    }
}

}  // namespace nomavlc
