#pragma once

#include <cstddef>
#include <vector>

#include "nomavlc/nomavlc.hpp"
#include "oracles.hpp"

namespace fixtures {

inline oracle::Gains gains(const nomavlc::ChannelMatrix& h) {
  oracle::Gains g(h.users(), std::vector<double>(h.leds()));
  for (std::size_t j = 0; j < h.users(); ++j)
    for (std::size_t i = 0; i < h.leds(); ++i) g[j][i] = h(j, i);
  return g;
}

inline oracle::Pairs pairs(const nomavlc::PairSet& ps) {
  oracle::Pairs out(ps.leds());
  for (std::size_t i = 0; i < ps.leds(); ++i)
    for (const auto& p : ps.of(i))
      out[i].push_back({static_cast<int>(p.strong), p.weak ? static_cast<int>(*p.weak) : -1});
  return out;
}

inline oracle::Alloc alloc(const nomavlc::AllocationMatrix& x) {
  oracle::Alloc a(x.leds(), std::vector<int>(x.subcarriers()));
  for (std::size_t i = 0; i < x.leds(); ++i)
    for (std::size_t k = 0; k < x.subcarriers(); ++k) a[i][k] = x(i, k);
  return a;
}

/// Default link constants, spelled out independently of the library.
inline oracle::Link link(double dbm = 35.0, std::size_t k = 16) {
  return oracle::link(dbm, 3.2, 0.53, 1e-19, 20e6, k);
}

/// One realization's channel, binding and pairs at the reference settings.
struct Drop {
  nomavlc::Scenario scenario;
  nomavlc::ChannelMatrix h;
  nomavlc::PairSet pairs;
  nomavlc::LinkBudget budget;
};

inline Drop drop(std::uint64_t seed, std::size_t users = 20, std::size_t leds = 4, std::size_t k = 16,
                 nomavlc::Scheme scheme = nomavlc::Scheme::not_imposed) {
  using namespace nomavlc;
  Drop d;
  d.scenario = make_scenario(Room{}, leds, 60.0, users, UserTerminal{}, seed);
  d.h = channel_matrix(d.scenario);
  auto b = bind_max_gain(d.h);
  if (scheme == Scheme::imposed) {
    Rng rng(seed + 1);
    b = repair_parity(b, d.scenario, rng).binding;
  }
  d.pairs = d_nlupa(b, d.h, scheme);
  NoiseConfig noise;
  noise.subcarriers = k;
  d.budget = make_link_budget(PowerConfig{}, noise);
  return d;
}

}  // namespace fixtures
