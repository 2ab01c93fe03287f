/* Copyright 2026 The CCZPulse Authors. All Rights Reserved.
Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at
    http://www.apache.org/licenses/LICENSE-2.0
Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

// cczpulse: command-line front end for CCZ pulse design on transmon chains.
//
//   cczpulse optimize <config.json> [--seed S]
//   cczpulse evaluate <pulse.json> <config.json> [--decohere T_us]
//   cczpulse sweep <config.json> --axis {theta|coupling|coherence}
//                  --grid v1,v2,... [--pulse file] [--seed S]
//   cczpulse bench --dim D --budget E [--seed S]
//
// Exit codes: 0 success, 1 runtime failure, 2 usage or configuration error.

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cczpulse/benchmarks.hpp"
#include "cczpulse/decoherence.hpp"
#include "cczpulse/fidelity.hpp"
#include "cczpulse/io.hpp"
#include "cczpulse/sussade.hpp"

namespace fs = std::filesystem;
using namespace cczpulse;

namespace {

std::string timestamp_now() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  localtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y%m%d-%H%M%S", &tm);
  return buf;
}

fs::path output_root(const RunConfig& cfg) {
  if (const char* env = std::getenv("CCZPULSE_OUTPUT_ROOT"); env && *env) return fs::path(env);
  return fs::path(cfg.output_dir);
}

fs::path make_run_dir(const RunConfig& cfg) {
  const fs::path root = output_root(cfg);
  fs::path dir = root / (cfg.label + "-" + timestamp_now());
  for (int suffix = 2; fs::exists(dir); ++suffix)
    dir = root / (cfg.label + "-" + timestamp_now() + "-" + std::to_string(suffix));
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::runtime_error(dir.string() + ": cannot create run directory: " + ec.message());
  return dir;
}

nlohmann::json describe_pulse_scores(const TransmonChain& chain, const ControlTable& table) {
  const EvolutionResult evo = propagate(chain, table);
  CompensationPhases phases;
  try {
    phases = extract_phases(evo.u_comp);
  } catch (const DegeneratePhaseError&) {
    phases = CompensationPhases{};
  }
  nlohmann::json j;
  j["fidelity"] = intrinsic_fidelity(evo.u_comp, phases);
  j["phases_rad"] = {phases.theta[0], phases.theta[1], phases.theta[2]};
  return j;
}

int cmd_optimize(const std::string& config_path, std::optional<std::uint64_t> seed) {
  RunConfig cfg = load_run_config(config_path);
  if (seed) cfg.optimizer.seed = *seed;

  const auto objective = make_ccz_objective(cfg.chain, cfg.pulse);
  const auto t0 = std::chrono::steady_clock::now();
  const OptimizeResult result = optimize(objective, cfg.optimizer);
  const double wall_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  const ControlTable best =
      ControlTable::from_genome(result.best.x, cfg.chain.n_transmons, cfg.pulse);
  const fs::path dir = make_run_dir(cfg);
  save_json_file((dir / "pulse.json").string(), pulse_to_json(best));
  {
    std::ofstream trace(dir / "trace.csv");
    if (!trace) throw std::runtime_error((dir / "trace.csv").string() + ": cannot open for writing");
    write_trace_csv(trace, result.trace);
  }

  nlohmann::json summary = describe_pulse_scores(cfg.chain, best);
  summary["label"] = cfg.label;
  summary["evaluations"] = result.evaluations;
  summary["generations"] = result.generations;
  summary["target_reached"] = result.target_reached;
  summary["wall_time_s"] = wall_s;
  summary["config_hash"] = config_hash_hex(cfg);
  summary["seed"] = cfg.optimizer.seed;
  summary["pulse_file"] = "pulse.json";
  summary["trace_file"] = "trace.csv";
  save_json_file((dir / "summary.json").string(), summary);

  std::cout << "run directory: " << dir.string() << "\n"
            << "best fidelity: " << format_g17(summary["fidelity"].get<double>()) << " after "
            << result.evaluations << " evaluations\n";
  return 0;
}

int cmd_evaluate(const std::string& pulse_path, const std::string& config_path,
                 std::optional<double> decohere_t_us) {
  const RunConfig cfg = load_run_config(config_path);
  const ControlTable pulse = load_pulse(pulse_path);
  if (pulse.n_transmons() != cfg.chain.n_transmons)
    throw ConfigError(pulse_path + ": pulse has " + std::to_string(pulse.n_transmons()) +
                      " rows but the chain has " + std::to_string(cfg.chain.n_transmons) +
                      " transmons");
  if (pulse.n_controls() != cfg.n_controls)
    throw ConfigError(pulse_path + ": pulse has " + std::to_string(pulse.n_controls()) +
                      " control points but the configuration expects " +
                      std::to_string(cfg.n_controls));

  nlohmann::json out = describe_pulse_scores(cfg.chain, pulse);
  if (decohere_t_us) {
    if (!(*decohere_t_us > 0.0)) throw ConfigError("--decohere: T must be > 0");
    out["t_us"] = *decohere_t_us;
    out["average_state_fidelity"] =
        average_state_fidelity(cfg.chain, pulse, *decohere_t_us, *decohere_t_us);
  } else if (cfg.decoherence) {
    out["t1_us"] = cfg.decoherence->t1_us;
    out["t2_us"] = cfg.decoherence->t2_us;
    out["average_state_fidelity"] =
        average_state_fidelity(cfg.chain, pulse, cfg.decoherence->t1_us, cfg.decoherence->t2_us);
  }
  std::cout << out.dump(2) << "\n";
  return 0;
}

std::vector<double> parse_grid(const std::string& grid) {
  std::vector<double> values;
  std::stringstream ss(grid);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t pos = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &pos);
    } catch (const std::exception&) {
      throw ConfigError("--grid: cannot parse \"" + item + "\" as a number");
    }
    if (pos != item.size()) throw ConfigError("--grid: cannot parse \"" + item + "\" as a number");
    values.push_back(v);
  }
  if (values.empty()) throw ConfigError("--grid: grid must be nonempty");
  return values;
}

int cmd_sweep(const std::string& config_path, const std::string& axis, const std::string& grid,
              const std::string& pulse_path, std::optional<std::uint64_t> seed) {
  RunConfig cfg = load_run_config(config_path);
  if (seed) cfg.optimizer.seed = *seed;
  const std::vector<double> values = parse_grid(grid);

  if (axis == "theta" || axis == "coupling") {
    std::cout << (axis == "theta" ? "theta_ns" : "coupling_ghz") << ",best_fidelity,evaluations\n";
    for (double v : values) {
      RunConfig point = cfg;
      if (axis == "theta") {
        const double n = v / cfg.pulse.dt_ns;
        point.n_controls = static_cast<int>(std::lround(n));
        if (point.n_controls < 1 || std::abs(n - point.n_controls) > 1e-9)
          throw ConfigError("--grid: theta " + format_g17(v) + " ns is not a multiple of dt_ns");
        const int dim = point.chain.n_transmons * point.n_controls;
        point.optimizer.lo = OptimizerConfig::box(dim, point.pulse.lo_ghz);
        point.optimizer.hi = OptimizerConfig::box(dim, point.pulse.hi_ghz);
      } else {
        for (double& g : point.chain.g_ghz) g = v;
        point.validate();
      }
      const OptimizeResult result = optimize(make_ccz_objective(point.chain, point.pulse), point.optimizer);
      std::cout << format_g17(v) << ',' << format_g17(result.best.fitness) << ','
                << result.evaluations << std::endl;
    }
    return 0;
  }

  if (axis == "coherence") {
    ControlTable pulse;
    if (!pulse_path.empty()) {
      pulse = load_pulse(pulse_path);
      if (pulse.n_transmons() != cfg.chain.n_transmons)
        throw ConfigError(pulse_path + ": pulse rows do not match the configured chain");
    } else {
      std::cerr << "no --pulse given; optimizing once with the configuration first\n";
      const OptimizeResult result = optimize(make_ccz_objective(cfg.chain, cfg.pulse), cfg.optimizer);
      pulse = ControlTable::from_genome(result.best.x, cfg.chain.n_transmons, cfg.pulse);
    }
    std::cout << "t_us,average_state_fidelity\n";
    for (double t_us : values) {
      if (!(t_us > 0.0)) throw ConfigError("--grid: coherence times must be > 0");
      std::cout << format_g17(t_us) << ','
                << format_g17(average_state_fidelity(cfg.chain, pulse, t_us, t_us)) << std::endl;
    }
    return 0;
  }

  throw ConfigError("--axis: expected theta, coupling, or coherence");
}

int cmd_bench(int dim, long budget, std::uint64_t seed) {
  if (dim < 1) throw ConfigError("--dim: must be >= 1");
  if (budget < 128) throw ConfigError("--budget: must allow at least a few generations (>= 128)");

  std::cout << "function,algorithm,best_fitness,evaluations\n";
  for (const BenchmarkObjective& bench : benchmark_suite()) {
    for (const bool subspace : {true, false}) {
      OptimizerConfig opt;
      opt.lo = OptimizerConfig::box(dim, bench.lo);
      opt.hi = OptimizerConfig::box(dim, bench.hi);
      opt.seed = seed;
      opt.max_evaluations = budget;
      if (subspace) {
        opt.switch_s = 0.14;  // 1-D subspace breeding
        opt.subspace_dims = {1};
      } else {
        opt.switch_s = 0.0;   // plain self-adaptation off: textbook DE/rand/1/bin
        opt.kappa1 = 0.0;
        opt.kappa2 = 0.0;
      }
      const OptimizeResult result = optimize(bench.value, opt);
      std::cout << bench.name << ',' << (subspace ? "sussade_1d" : "standard_de") << ','
                << format_g17(result.best.fitness) << ',' << result.evaluations << std::endl;
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"CCZ pulse synthesis for chains of coupled transmons"};
  app.require_subcommand(1);

  std::string config_path, pulse_path, axis, grid, sweep_pulse;
  std::optional<std::uint64_t> seed;
  std::optional<double> decohere_t_us;
  int bench_dim = 78;
  long bench_budget = 100000;
  std::uint64_t bench_seed = 1;

  CLI::App* optimize_cmd = app.add_subcommand("optimize", "search for an optimal pulse");
  optimize_cmd->add_option("config", config_path, "run configuration (JSON)")->required();
  optimize_cmd->add_option("--seed", seed, "override the configured RNG seed");

  CLI::App* evaluate_cmd = app.add_subcommand("evaluate", "score a saved pulse");
  evaluate_cmd->add_option("pulse", pulse_path, "pulse file (JSON)")->required();
  evaluate_cmd->add_option("config", config_path, "run configuration (JSON)")->required();
  evaluate_cmd->add_option("--decohere", decohere_t_us,
                           "also report the average state fidelity at T1 = T2 = T_us");

  CLI::App* sweep_cmd = app.add_subcommand("sweep", "re-optimize or re-score along one axis");
  sweep_cmd->add_option("config", config_path, "run configuration (JSON)")->required();
  sweep_cmd->add_option("--axis", axis, "theta | coupling | coherence")->required();
  sweep_cmd->add_option("--grid", grid, "comma-separated axis values")->required();
  sweep_cmd->add_option("--pulse", sweep_pulse, "fixed pulse for the coherence axis");
  sweep_cmd->add_option("--seed", seed, "override the configured RNG seed");

  CLI::App* bench_cmd = app.add_subcommand("bench", "optimizer check on standard test functions");
  bench_cmd->add_option("--dim", bench_dim, "problem dimension");
  bench_cmd->add_option("--budget", bench_budget, "objective evaluation budget");
  bench_cmd->add_option("--seed", bench_seed, "RNG seed");

  try {
    app.parse(argc, argv);
    if (*optimize_cmd) return cmd_optimize(config_path, seed);
    if (*evaluate_cmd) return cmd_evaluate(pulse_path, config_path, decohere_t_us);
    if (*sweep_cmd) return cmd_sweep(config_path, axis, grid, sweep_pulse, seed);
    if (*bench_cmd) return cmd_bench(bench_dim, bench_budget, bench_seed);
    return 2;
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
