#pragma once

#include <cstddef>
#include <cstdint>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "nomavlc/experiment.hpp"

namespace nomavlc {

namespace detail {

inline double num(const nlohmann::json& v, const std::string& key) {
  if (!v.is_number()) throw ConfigError("'" + key + "' must be a number");
  return v.get<double>();
}

inline std::size_t count(const nlohmann::json& v, const std::string& key) {
  return as_count(num(v, key), key);
}

inline std::string str(const nlohmann::json& v, const std::string& key) {
  if (!v.is_string()) throw ConfigError("'" + key + "' must be a string");
  return v.get<std::string>();
}

inline std::vector<double> num_list(const nlohmann::json& v, const std::string& key) {
  std::vector<double> out;
  if (v.is_array()) {
    for (const auto& e : v) out.push_back(num(e, key));
  } else {
    out.push_back(num(v, key));
  }
  return out;
}

}  // namespace detail

/// Applies a flat JSON object of settings on top of `cfg`. Unknown keys are
/// rejected so typos do not silently fall back to defaults.
inline void apply_config(ExperimentConfig& cfg, const nlohmann::json& j) {
  using detail::count;
  using detail::num;
  using detail::str;
  if (!j.is_object()) throw ConfigError("configuration must be a JSON object");
  auto& b = cfg.base;
  using Setter = std::function<void(const nlohmann::json&, const std::string&)>;
  const std::map<std::string, Setter> setters{
      {"scheme", [&](auto& v, auto& k) { cfg.schemes = parse_schemes(str(v, k)); }},
      {"optimizer", [&](auto& v, auto& k) { b.optimizer = parse_optimizer(str(v, k)); }},
      {"sweep", [&](auto& v, auto& k) { cfg.sweep = parse_sweep_var(str(v, k)); }},
      {"values", [&](auto& v, auto& k) { cfg.values = detail::num_list(v, k); }},
      {"realizations", [&](auto& v, auto& k) { cfg.realizations = count(v, k); }},
      {"seed", [&](auto& v, auto& k) {
         if (!v.is_number_unsigned()) throw ConfigError("'" + k + "' must be a non-negative integer");
         cfg.master_seed = v.template get<std::uint64_t>();
       }},
      {"workers", [&](auto& v, auto& k) { cfg.workers = count(v, k); }},
      {"users", [&](auto& v, auto& k) { b.users = count(v, k); }},
      {"leds", [&](auto& v, auto& k) { b.leds = count(v, k); }},
      {"subcarriers", [&](auto& v, auto& k) {
         cfg.subcarriers.clear();
         for (double x : detail::num_list(v, k)) cfg.subcarriers.push_back(as_count(x, k));
       }},
      {"electrical_power_dbm", [&](auto& v, auto& k) { b.power.electrical_power_dbm = num(v, k); }},
      {"electrical_to_optical_ratio", [&](auto& v, auto& k) { b.power.electrical_to_optical_ratio = num(v, k); }},
      {"oe_efficiency", [&](auto& v, auto& k) { b.power.oe_efficiency = num(v, k); }},
      {"noise_psd", [&](auto& v, auto& k) { b.noise.psd = num(v, k); }},
      {"bandwidth_hz", [&](auto& v, auto& k) { b.noise.bandwidth = num(v, k); }},
      {"led_semi_angle_deg", [&](auto& v, auto& k) { b.led_semi_angle_deg = num(v, k); }},
      {"fov_semi_angle_deg", [&](auto& v, auto& k) { b.receiver.fov_semi_angle_deg = num(v, k); }},
      {"pd_area_m2", [&](auto& v, auto& k) { b.receiver.pd_area = num(v, k); }},
      {"refractive_index", [&](auto& v, auto& k) { b.receiver.refractive_index = num(v, k); }},
      {"optical_filter_gain", [&](auto& v, auto& k) { b.receiver.optical_filter_gain = num(v, k); }},
      {"room_width", [&](auto& v, auto& k) { b.room.width = num(v, k); }},
      {"room_depth", [&](auto& v, auto& k) { b.room.depth = num(v, k); }},
      {"room_height", [&](auto& v, auto& k) { b.room.height = num(v, k); }},
      {"receiver_plane_height", [&](auto& v, auto& k) { b.room.receiver_plane_height = num(v, k); }},
      {"sa_t0", [&](auto& v, auto& k) { b.sa.t0 = num(v, k); }},
      {"sa_alpha", [&](auto& v, auto& k) { b.sa.alpha = num(v, k); }},
      {"sa_m0", [&](auto& v, auto& k) { b.sa.m0 = num(v, k); }},
      {"sa_beta", [&](auto& v, auto& k) { b.sa.beta = num(v, k); }},
      {"sa_outer_iterations", [&](auto& v, auto& k) { b.sa.outer_iterations = count(v, k); }},
      {"sa_time_limit_s", [&](auto& v, auto& k) { b.sa.time_limit_s = num(v, k); }},
      {"ts_tabu_list_len", [&](auto& v, auto& k) { b.ts.tabu_list_len = count(v, k); }},
      {"ts_candidate_list_len", [&](auto& v, auto& k) { b.ts.candidate_list_len = count(v, k); }},
      {"ts_max_evaluations", [&](auto& v, auto& k) { b.ts.max_evaluations = count(v, k); }},
      {"ts_restart_after", [&](auto& v, auto& k) { b.ts.restart_after = count(v, k); }},
      {"penalty_p1", [&](auto& v, auto& k) { b.penalty.p1 = num(v, k); }},
      {"penalty_p2", [&](auto& v, auto& k) { b.penalty.p2 = num(v, k); }},
      {"spread_limit", [&](auto& v, auto& k) { b.penalty.spread_limit = num(v, k); }},
      {"rate_unit_bps", [&](auto& v, auto& k) { b.penalty.rate_unit = num(v, k); }},
      {"repair_max_iters", [&](auto& v, auto& k) { b.repair_max_iters = count(v, k); }},
      {"bisection_bracket_tol", [&](auto& v, auto& k) { b.bisection.bracket_tol = num(v, k); }},
      {"bisection_rate_gap_tol", [&](auto& v, auto& k) { b.bisection.rate_gap_tol = num(v, k); }},
      {"bisection_max_iters", [&](auto& v, auto& k) {
         b.bisection.max_iters = static_cast<int>(count(v, k));
       }},
  };
  for (const auto& [key, value] : j.items()) {
    const auto it = setters.find(key);
    if (it == setters.end()) throw ConfigError("unknown configuration key '" + key + "'");
    it->second(value, key);
  }
}

inline ExperimentConfig load_config(std::istream& in, ExperimentConfig cfg = {}) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in, nullptr, true, /*ignore_comments=*/true);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("malformed configuration: ") + e.what());
  }
  apply_config(cfg, j);
  return cfg;
}

inline ExperimentConfig load_config_file(const std::string& path, ExperimentConfig cfg = {}) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open configuration file '" + path + "'");
  return load_config(in, std::move(cfg));
}

}  // namespace nomavlc
