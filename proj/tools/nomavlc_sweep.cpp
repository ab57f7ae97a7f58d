// Monte-Carlo sweep driver: runs the binding / pairing / allocation pipeline
// over a parameter sweep and writes one CSV row per (value, scheme, K).

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "nomavlc/config.hpp"
#include "nomavlc/nomavlc.hpp"

namespace {

std::vector<double> parse_values(const std::string& list) {
  std::vector<double> out;
  std::stringstream ss(list);
  for (std::string item; std::getline(ss, item, ',');) {
    if (item.empty()) continue;
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size()) throw nomavlc::ConfigError("bad sweep value '" + item + "'");
    out.push_back(v);
  }
  return out;
}

std::ofstream open_out(const std::filesystem::path& p) {
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream f(p);
  if (!f) throw std::runtime_error("cannot write " + p.string());
  f.precision(17);
  return f;
}

/// Writes the intermediate tables of realization 0 for every sweep point.
void dump_first_realizations(const nomavlc::ExperimentConfig& cfg, const std::filesystem::path& dir,
                             bool sinr) {
  using namespace nomavlc;
  std::filesystem::create_directories(dir);
  for (double v : cfg.values)
    for (auto s : cfg.schemes)
      for (auto k : k_values(cfg)) {
        const RunParams p = point_params(cfg, v, s, k);
        const auto r = run_realization(p, realization_seed(cfg.master_seed, 0));
        const std::string stem = std::string(to_string(cfg.sweep)) + "_" + format_number(v) + "_" +
                                 std::string(to_string(s)) + "_K" + std::to_string(p.noise.subcarriers) +
                                 "_r0_";
        auto f = open_out(dir / (stem + "positions.csv"));
        write_positions_csv(f, r.scenario);
        f = open_out(dir / (stem + "binding.csv"));
        write_binding_csv(f, r.binding);
        f = open_out(dir / (stem + "pairs.csv"));
        write_pairs_csv(f, r.pairs);
        f = open_out(dir / (stem + "allocation.csv"));
        write_allocation_csv(f, r.search.best, r.pairs, r.report().splits);
        f = open_out(dir / (stem + "trace.csv"));
        write_trace_csv(f, r.search.trace);
        if (sinr) {
          f = open_out(dir / (stem + "sinr.csv"));
          write_sinr_csv(f, channel_matrix(r.scenario), r.pairs, r.search.best, r.report().splits,
                         r.budget);
        }
      }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Max-min rate sweeps for multi-carrier NOMA-VLC networks"};
  std::string config_path, scheme, sweep, values, optimizer, out_path, dump_dir;
  std::size_t realizations = 0, workers = 0;
  std::uint64_t seed = 0;
  bool sinr = false, quiet = false;
  app.add_option("--config", config_path, "JSON configuration file")->check(CLI::ExistingFile);
  app.add_option("--scheme", scheme, "imposed | not-imposed | both");
  app.add_option("--sweep", sweep, "users | leds | subcarriers | power | led-angle | fov | height");
  app.add_option("--values", values, "comma-separated sweep values");
  app.add_option("--realizations", realizations, "user drops per point");
  app.add_option("--seed", seed, "master seed");
  app.add_option("--optimizer", optimizer, "sa | ts");
  app.add_option("--workers", workers, "worker threads");
  app.add_option("--out", out_path, "result CSV (standard output if omitted)");
  app.add_option("--dump-dir", dump_dir, "write per-stage tables of realization 0 here");
  app.add_flag("--sinr", sinr, "include per-subcarrier SINR tables in the dump");
  app.add_flag("-q,--quiet", quiet, "suppress the summary table");
  CLI11_PARSE(app, argc, argv);

  try {
    nomavlc::ExperimentConfig cfg;
    if (!config_path.empty()) cfg = nomavlc::load_config_file(config_path);
    if (!scheme.empty()) cfg.schemes = nomavlc::parse_schemes(scheme);
    if (!sweep.empty()) cfg.sweep = nomavlc::parse_sweep_var(sweep);
    if (!values.empty()) cfg.values = parse_values(values);
    if (app.count("--realizations")) cfg.realizations = realizations;
    if (app.count("--seed")) cfg.master_seed = seed;
    if (!optimizer.empty()) cfg.base.optimizer = nomavlc::parse_optimizer(optimizer);
    if (app.count("--workers")) cfg.workers = workers;
    nomavlc::validate(cfg);

    std::ostream* summary = quiet ? nullptr : (out_path.empty() ? &std::cerr : &std::cout);
    const auto rows = nomavlc::run_sweep(cfg, summary);
    if (out_path.empty()) {
      nomavlc::write_results_csv(std::cout, rows);
    } else {
      auto f = open_out(out_path);
      nomavlc::write_results_csv(f, rows);
    }
    if (!dump_dir.empty()) dump_first_realizations(cfg, dump_dir, sinr);
  } catch (const nomavlc::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
