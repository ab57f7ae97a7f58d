#pragma once

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "nomavlc/allocation.hpp"
#include "nomavlc/association.hpp"
#include "nomavlc/geometry.hpp"
#include "nomavlc/pairing.hpp"
#include "nomavlc/phy.hpp"
#include "nomavlc/rng.hpp"
#include "nomavlc/search.hpp"

namespace nomavlc {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Optimizer { sa, ts };

inline std::string_view to_string(Optimizer o) { return o == Optimizer::sa ? "sa" : "ts"; }

inline Optimizer parse_optimizer(std::string_view s) {
  if (s == "sa") return Optimizer::sa;
  if (s == "ts") return Optimizer::ts;
  throw ConfigError("unknown optimizer '" + std::string(s) + "'");
}

enum class SweepVar { users, leds, subcarriers, power, led_angle, fov, height };

inline std::string_view to_string(SweepVar v) {
  switch (v) {
    case SweepVar::users: return "users";
    case SweepVar::leds: return "leds";
    case SweepVar::subcarriers: return "subcarriers";
    case SweepVar::power: return "power";
    case SweepVar::led_angle: return "led-angle";
    case SweepVar::fov: return "fov";
    case SweepVar::height: return "height";
  }
  return "?";
}

inline SweepVar parse_sweep_var(std::string_view s) {
  for (auto v : {SweepVar::users, SweepVar::leds, SweepVar::subcarriers, SweepVar::power,
                 SweepVar::led_angle, SweepVar::fov, SweepVar::height})
    if (to_string(v) == s) return v;
  throw ConfigError("unknown sweep variable '" + std::string(s) + "'");
}

inline std::vector<Scheme> parse_schemes(std::string_view s) {
  if (s == "both") return {Scheme::imposed, Scheme::not_imposed};
  try {
    return {parse_scheme(s)};
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

/// Everything one pipeline run needs. Defaults follow the reference
/// network: 5 x 5 x 3 m room, 2 x 2 LEDs, 20 users, 35 dBm, 60/85 degrees.
struct RunParams {
  Room room;
  std::size_t users = 20;
  std::size_t leds = 4;
  double led_semi_angle_deg = 60.0;
  UserTerminal receiver;
  PowerConfig power;
  NoiseConfig noise;
  Scheme scheme = Scheme::not_imposed;
  Optimizer optimizer = Optimizer::sa;
  SaParams sa;
  TsParams ts;
  PenaltyParams penalty;
  BisectionOptions bisection;
  std::size_t repair_max_iters = 1000;

  /// Throws ConfigError for anything that would fail mid-run.
  void validate() const {
    try {
      room.validate();
      receiver.validate();
      noise.validate();
      (void)lambertian_order(led_semi_angle_deg);
      (void)place_leds_lattice(room, leds);
      (void)make_link_budget(power, noise);
    } catch (const std::exception& e) {
      throw ConfigError(e.what());
    }
    if (users == 0) throw ConfigError("user count must be positive");
    if (scheme == Scheme::imposed && users % 2 != 0)
      throw ConfigError("imposed scheme needs an even user count, got " + std::to_string(users));
    if (!(sa.alpha > 0.0 && sa.alpha < 1.0)) throw ConfigError("SA cooling rate must lie in (0, 1)");
    if (!(sa.beta >= 1.0)) throw ConfigError("SA Metropolis growth must be >= 1");
    if (!(sa.m0 > 0.0) || !(sa.t0 >= 0.0)) throw ConfigError("invalid SA parameters");
    if (!(penalty.spread_limit >= 0.0 && penalty.spread_limit <= 1.0))
      throw ConfigError("spread limit must lie in [0, 1]");
    if (!(penalty.rate_unit > 0.0)) throw ConfigError("rate unit must be positive");
  }
};

struct RealizationResult {
  Scenario scenario;
  Binding binding;
  PairSet pairs;
  LinkBudget budget;
  SearchResult search;
  std::size_t repair_iterations = 0;

  const RateReport& report() const { return search.report; }
  double min_rate() const { return search.report.min_rate(); }
};

namespace seed_stream {
inline constexpr std::uint64_t scenario = 1;
inline constexpr std::uint64_t repair = 2;
inline constexpr std::uint64_t optimizer = 3;
}  // namespace seed_stream

/// Full pipeline for one user drop: channel, binding (+ parity repair under
/// the imposed scheme), pairing, then subcarrier search with nested
/// power-split bisection. Deterministic in (params, seed).
inline RealizationResult run_realization(const RunParams& p, std::uint64_t seed) {
  p.validate();
  RealizationResult out;
  out.scenario = make_scenario(p.room, p.leds, p.led_semi_angle_deg, p.users, p.receiver,
                               derive_seed(seed, {seed_stream::scenario}));
  ChannelMatrix h = channel_matrix(out.scenario);
  out.binding = bind_max_gain(h);
  if (p.scheme == Scheme::imposed) {
    Rng rng(derive_seed(seed, {seed_stream::repair}));
    auto rep = repair_parity(out.binding, out.scenario, rng, p.repair_max_iters);
    if (!rep.converged)
      throw std::runtime_error("parity repair did not converge in " + std::to_string(rep.iterations) +
                               " iterations");
    out.binding = std::move(rep.binding);
    out.repair_iterations = rep.iterations;
  }
  out.pairs = d_nlupa(out.binding, h, p.scheme);
  out.budget = make_link_budget(p.power, p.noise);
  const AllocationProblem problem(std::move(h), out.pairs, out.budget, p.penalty, p.bisection);
  Rng rng(derive_seed(seed, {seed_stream::optimizer}));
  out.search = p.optimizer == Optimizer::sa ? simulated_annealing(problem, p.sa, rng)
                                            : tabu_search(problem, p.ts, rng);
  return out;
}

struct ExperimentConfig {
  RunParams base;
  std::vector<Scheme> schemes{Scheme::imposed, Scheme::not_imposed};
  std::vector<std::size_t> subcarriers{16, 32};
  SweepVar sweep = SweepVar::users;
  std::vector<double> values{20};
  std::size_t realizations = 100;
  std::uint64_t master_seed = 1;
  std::size_t workers = 1;
};

/// Seed of realization r. It ignores the sweep point, so every point of a
/// sweep sees the same user drops and reordering values changes nothing.
inline std::uint64_t realization_seed(std::uint64_t master, std::size_t r) {
  return derive_seed(master, {static_cast<std::uint64_t>(r)});
}

inline std::size_t as_count(double v, std::string_view what) {
  if (!(v >= 0.0) || v != std::floor(v) || v > 1e9)
    throw ConfigError(std::string(what) + " must be a non-negative integer");
  return static_cast<std::size_t>(v);
}

/// The (value, K) point of a sweep applied to the base parameters.
inline RunParams point_params(const ExperimentConfig& cfg, double value, Scheme scheme, std::size_t k) {
  RunParams p = cfg.base;
  p.scheme = scheme;
  p.noise.subcarriers = k;
  switch (cfg.sweep) {
    case SweepVar::users: p.users = as_count(value, "users"); break;
    case SweepVar::leds: p.leds = as_count(value, "leds"); break;
    case SweepVar::subcarriers: p.noise.subcarriers = as_count(value, "subcarriers"); break;
    case SweepVar::power: p.power.electrical_power_dbm = value; break;
    case SweepVar::led_angle: p.led_semi_angle_deg = value; break;
    case SweepVar::fov: p.receiver.fov_semi_angle_deg = value; break;
    case SweepVar::height: p.room.height = value; break;
  }
  return p;
}

/// K values actually used: a subcarrier sweep supplies K itself.
inline std::vector<std::size_t> k_values(const ExperimentConfig& cfg) {
  if (cfg.sweep == SweepVar::subcarriers) return {0};
  return cfg.subcarriers;
}

inline void validate(const ExperimentConfig& cfg) {
  if (cfg.values.empty()) throw ConfigError("sweep value list is empty");
  if (cfg.schemes.empty()) throw ConfigError("scheme list is empty");
  if (cfg.subcarriers.empty()) throw ConfigError("subcarrier list is empty");
  if (cfg.realizations == 0) throw ConfigError("realization count must be positive");
  for (double v : cfg.values)
    for (auto s : cfg.schemes)
      for (auto k : k_values(cfg)) point_params(cfg, v, s, k).validate();
}

struct ResultRow {
  std::string sweep_var;
  double sweep_value = 0.0;
  Scheme scheme = Scheme::not_imposed;
  std::size_t subcarriers = 0;
  Optimizer optimizer = Optimizer::sa;
  double mean_minrate_bps = 0.0;
  double std_bps = 0.0;
  std::size_t realizations = 0;  // successful ones
  double min_bps = 0.0;
  double max_bps = 0.0;
  double mean_evaluations = 0.0;
  double mean_repair_iterations = 0.0;
  std::size_t failed = 0;
  std::vector<double> per_realization;  // min rates in realization order
};

struct RealizationSummary {
  bool ok = false;
  double min_rate = 0.0;
  std::size_t evaluations = 0;
  std::size_t repair_iterations = 0;
  std::string error;
};

/// Runs every (value, scheme, K, realization) job on `cfg.workers` threads.
/// Rows come out in (value, scheme, K) order and are independent of the
/// worker count. `progress` receives one line per finished row if given.
inline std::vector<ResultRow> run_sweep(const ExperimentConfig& cfg, std::ostream* progress = nullptr) {
  validate(cfg);
  const auto ks = k_values(cfg);
  struct Point {
    double value;
    Scheme scheme;
    std::size_t k;
    RunParams params;
  };
  std::vector<Point> points;
  for (double v : cfg.values)
    for (auto s : cfg.schemes)
      for (auto k : ks) points.push_back({v, s, k, point_params(cfg, v, s, k)});

  const std::size_t per_point = cfg.realizations;
  std::vector<RealizationSummary> results(points.size() * per_point);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t job; (job = next.fetch_add(1)) < results.size();) {
      const auto& pt = points[job / per_point];
      auto& out = results[job];
      try {
        const auto r = run_realization(pt.params, realization_seed(cfg.master_seed, job % per_point));
        out.ok = true;
        out.min_rate = r.min_rate();
        out.evaluations = r.search.evaluations;
        out.repair_iterations = r.repair_iterations;
      } catch (const std::exception& e) {
        out.error = e.what();
      }
    }
  };
  const std::size_t n_workers = std::max<std::size_t>(1, std::min(cfg.workers, results.size()));
  if (n_workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < n_workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  std::vector<ResultRow> rows;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& pt = points[i];
    ResultRow row;
    row.sweep_var = std::string(to_string(cfg.sweep));
    row.sweep_value = pt.value;
    row.scheme = pt.scheme;
    row.subcarriers = pt.params.noise.subcarriers;
    row.optimizer = pt.params.optimizer;
    double sum = 0.0, evals = 0.0, repairs = 0.0;
    for (std::size_t r = 0; r < per_point; ++r) {
      const auto& s = results[i * per_point + r];
      if (!s.ok) {
        ++row.failed;
        if (progress) *progress << "realization " << r << " failed: " << s.error << '\n';
        continue;
      }
      row.per_realization.push_back(s.min_rate);
      sum += s.min_rate;
      evals += static_cast<double>(s.evaluations);
      repairs += static_cast<double>(s.repair_iterations);
    }
    row.realizations = row.per_realization.size();
    if (row.realizations > 0) {
      const double n = static_cast<double>(row.realizations);
      row.mean_minrate_bps = sum / n;
      row.mean_evaluations = evals / n;
      row.mean_repair_iterations = repairs / n;
      double ss = 0.0;
      for (double x : row.per_realization) ss += (x - row.mean_minrate_bps) * (x - row.mean_minrate_bps);
      row.std_bps = row.realizations > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
      const auto [lo, hi] = std::minmax_element(row.per_realization.begin(), row.per_realization.end());
      row.min_bps = *lo;
      row.max_bps = *hi;
    }
    if (progress)
      *progress << row.sweep_var << '=' << row.sweep_value << ' ' << to_string(row.scheme)
                << " K=" << row.subcarriers << ' ' << to_string(row.optimizer)
                << " mean=" << row.mean_minrate_bps / 1e6 << " Mbit/s std=" << row.std_bps / 1e6
                << " (n=" << row.realizations << ", failed=" << row.failed << ")\n";
    rows.push_back(std::move(row));
  }
  return rows;
}

/// Shortest round-trip decimal form.
inline std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline void write_results_csv(std::ostream& os, const std::vector<ResultRow>& rows) {
  os << "sweep_var,sweep_value,scheme,K,optimizer,mean_minrate_bps,std_bps,realizations,"
        "min_bps,max_bps,mean_evaluations,mean_repair_iterations,failed\n";
  for (const auto& r : rows) {
    os << r.sweep_var << ',' << format_number(r.sweep_value) << ',' << to_string(r.scheme) << ','
       << r.subcarriers << ',' << to_string(r.optimizer) << ',' << format_number(r.mean_minrate_bps)
       << ',' << format_number(r.std_bps) << ',' << r.realizations << ',' << format_number(r.min_bps)
       << ',' << format_number(r.max_bps) << ',' << format_number(r.mean_evaluations) << ','
       << format_number(r.mean_repair_iterations) << ',' << r.failed << '\n';
  }
}

}  // namespace nomavlc
