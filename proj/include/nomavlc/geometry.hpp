#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "nomavlc/rng.hpp"

namespace nomavlc {

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

inline double distance(const Vec3& a, const Vec3& b) {
  const double dx = a.x - b.x, dy = a.y - b.y, dz = a.z - b.z;
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

inline double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }

/// Empty rectangular room. The ceiling sits at `height`; receivers lie on a
/// horizontal plane at `receiver_plane_height`.
struct Room {
  double width = 5.0;
  double depth = 5.0;
  double height = 3.0;
  double receiver_plane_height = 0.85;

  void validate() const {
    if (!(width > 0 && depth > 0 && height > 0 && receiver_plane_height >= 0))
      throw std::invalid_argument("room dimensions must be positive");
    if (!(receiver_plane_height < height))
      throw std::invalid_argument("receiver plane must lie below the ceiling");
  }
};

/// Order of the Lambertian emission pattern for a given half-power
/// semi-angle in degrees.
inline double lambertian_order(double semi_angle_deg) {
  if (!(semi_angle_deg > 0.0 && semi_angle_deg < 90.0))
    throw std::domain_error("LED semi-angle must lie in (0, 90) degrees");
  return -1.0 / std::log2(std::cos(deg_to_rad(semi_angle_deg)));
}

/// Downward-facing LED on the ceiling.
struct Led {
  Vec3 position;
  double semi_angle_deg = 60.0;
  double lambertian_order = 1.0;

  Led() = default;
  Led(Vec3 pos, double semi_angle)
      : position(pos),
        semi_angle_deg(semi_angle),
        lambertian_order(nomavlc::lambertian_order(semi_angle)) {}
};

/// Receiver with an upward-facing photodiode.
struct UserTerminal {
  Vec3 position;
  double fov_semi_angle_deg = 85.0;
  double pd_area = 1.0e-4;
  double optical_filter_gain = 1.0;
  double refractive_index = 1.5;

  void validate() const {
    if (!(fov_semi_angle_deg > 0.0 && fov_semi_angle_deg <= 90.0))
      throw std::domain_error("FoV semi-angle must lie in (0, 90] degrees");
    if (!(pd_area > 0.0))
      throw std::invalid_argument("photodiode area must be positive");
  }
};

struct Scenario {
  Room room;
  std::vector<Led> leds;
  std::vector<UserTerminal> users;
  std::uint64_t rng_seed = 0;
};

inline bool is_perfect_square(std::size_t n, std::size_t* root = nullptr) {
  std::size_t r = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(n))));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  if (root) *root = r;
  return r * r == n;
}

/// Square LED lattice on the ceiling: the footprint is cut into sqrt(count)
/// equal strips per axis and one LED sits at each cell center.
inline std::vector<Vec3> place_leds_lattice(const Room& room, std::size_t count) {
  std::size_t side = 0;
  if (count == 0 || !is_perfect_square(count, &side))
    throw std::invalid_argument("LED count " + std::to_string(count) +
                                " is not a positive perfect square");
  std::vector<Vec3> out;
  out.reserve(count);
  const double s = static_cast<double>(side);
  for (std::size_t ix = 0; ix < side; ++ix) {
    for (std::size_t iy = 0; iy < side; ++iy) {
      out.push_back({(2.0 * ix + 1.0) * room.width / (2.0 * s),
                     (2.0 * iy + 1.0) * room.depth / (2.0 * s), room.height});
    }
  }
  return out;
}

/// I.i.d. uniform positions over the footprint at receiver height. Users are
/// drawn sequentially, so the first n positions do not depend on `count`.
inline std::vector<Vec3> sample_users(const Room& room, std::size_t count, Rng& rng) {
  std::vector<Vec3> out;
  out.reserve(count);
  for (std::size_t j = 0; j < count; ++j) {
    const double x = uniform_real(rng, 0.0, room.width);
    const double y = uniform_real(rng, 0.0, room.depth);
    out.push_back({x, y, room.receiver_plane_height});
  }
  return out;
}

/// Line-of-sight DC gain between a downward LED and an upward photodiode.
/// Irradiance and incidence angles coincide for this orientation. Returns
/// exactly zero outside the receiver field of view.
inline double channel_gain(const Led& led, const UserTerminal& user) {
  const double d = distance(led.position, user.position);
  if (!(d > 0.0)) throw std::invalid_argument("LED and user positions coincide");
  const double cos_incidence = (led.position.z - user.position.z) / d;
  const double cos_fov = std::cos(deg_to_rad(user.fov_semi_angle_deg));
  if (cos_incidence <= 0.0 || cos_incidence < cos_fov) return 0.0;

  const double sin_fov = std::sin(deg_to_rad(user.fov_semi_angle_deg));
  const double m = led.lambertian_order;
  const double chi2 = user.refractive_index * user.refractive_index;
  const double scale = (m + 1.0) * user.pd_area * chi2 * user.optical_filter_gain /
                       (2.0 * std::numbers::pi * d * d * sin_fov * sin_fov);
  return scale * std::pow(cos_incidence, m) * cos_incidence;
}

/// Row-major users x LEDs gain table.
class ChannelMatrix {
 public:
  ChannelMatrix() = default;
  ChannelMatrix(std::size_t users, std::size_t leds, std::vector<double> gains)
      : users_(users), leds_(leds), gains_(std::move(gains)) {
    if (gains_.size() != users_ * leds_)
      throw std::invalid_argument("channel matrix size mismatch");
  }

  std::size_t users() const { return users_; }
  std::size_t leds() const { return leds_; }
  double operator()(std::size_t user, std::size_t led) const {
    return gains_[user * leds_ + led];
  }
  const std::vector<double>& data() const { return gains_; }

 private:
  std::size_t users_ = 0;
  std::size_t leds_ = 0;
  std::vector<double> gains_;
};

inline ChannelMatrix channel_matrix(const Scenario& s) {
  std::vector<double> g;
  g.reserve(s.users.size() * s.leds.size());
  for (const auto& u : s.users)
    for (const auto& l : s.leds) g.push_back(channel_gain(l, u));
  return ChannelMatrix(s.users.size(), s.leds.size(), std::move(g));
}

/// Builds one realization: lattice LEDs and uniformly dropped users. Every
/// user copies the optics of `receiver`.
inline Scenario make_scenario(const Room& room, std::size_t led_count,
                              double led_semi_angle_deg, std::size_t user_count,
                              const UserTerminal& receiver, std::uint64_t seed) {
  room.validate();
  Scenario s;
  s.room = room;
  s.rng_seed = seed;
  for (const auto& p : place_leds_lattice(room, led_count))
    s.leds.emplace_back(p, led_semi_angle_deg);
  receiver.validate();
  Rng rng(seed);
  for (const auto& p : sample_users(room, user_count, rng)) {
    UserTerminal u = receiver;
    u.position = p;
    s.users.push_back(u);
  }
  return s;
}

inline void write_positions_csv(std::ostream& os, const Scenario& s) {
  os << "user_id,x,y,z\n";
  for (std::size_t j = 0; j < s.users.size(); ++j) {
    const auto& p = s.users[j].position;
    os << j << ',' << p.x << ',' << p.y << ',' << p.z << '\n';
  }
}

}  // namespace nomavlc
