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
#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cczpulse/errors.hpp"
#include "cczpulse/hamiltonian.hpp"
#include "cczpulse/pulses.hpp"
#include "cczpulse/sussade.hpp"

namespace cczpulse {

// File formats. Pulse files and run configurations are single JSON
// documents with a fixed schema; unknown keys are rejected so that typos
// fail loudly instead of silently falling back to defaults. CSV output uses
// 17 significant digits, enough to round-trip any double exactly.

namespace detail_io {

[[noreturn]] inline void fail(const std::string& path, const std::string& what) {
  throw ConfigError(path + ": " + what);
}

inline void check_object(const nlohmann::json& v, const std::string& path,
                         std::initializer_list<const char*> allowed) {
  if (!v.is_object()) fail(path, "expected a JSON object");
  for (const auto& [key, _] : v.items()) {
    bool known = false;
    for (const char* a : allowed)
      if (key == a) {
        known = true;
        break;
      }
    if (!known) fail(path + "." + key, "unknown key");
  }
}

inline const nlohmann::json& require(const nlohmann::json& obj, const std::string& path,
                                     const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) fail(path + "." + key, "missing required key");
  return *it;
}

inline double number(const nlohmann::json& v, const std::string& path) {
  if (!v.is_number()) fail(path, "expected a number");
  return v.get<double>();
}

inline long integer(const nlohmann::json& v, const std::string& path) {
  if (!v.is_number_integer()) fail(path, "expected an integer");
  return v.get<long>();
}

inline std::string text(const nlohmann::json& v, const std::string& path) {
  if (!v.is_string()) fail(path, "expected a string");
  return v.get<std::string>();
}

}  // namespace detail_io

inline std::string to_string(PulseShape shape) {
  return shape == PulseShape::PiecewiseConstant ? "piecewise_constant" : "erf_smoothed";
}

inline PulseShape pulse_shape_from_string(const std::string& s, const std::string& path) {
  if (s == "piecewise_constant") return PulseShape::PiecewiseConstant;
  if (s == "erf_smoothed") return PulseShape::ErfSmoothed;
  detail_io::fail(path, "expected \"piecewise_constant\" or \"erf_smoothed\"");
}

// ---------------------------------------------------------------------------
// Pulse file: {"dt_ns", "shape", "sigma_ns"?, "bounds_ghz", "points_ghz"}

inline nlohmann::json pulse_to_json(const ControlTable& table) {
  table.validate();
  nlohmann::json j;
  j["dt_ns"] = table.meta.dt_ns;
  j["shape"] = to_string(table.meta.shape);
  if (table.meta.shape == PulseShape::ErfSmoothed) j["sigma_ns"] = table.meta.sigma_ns;
  j["bounds_ghz"] = {table.meta.lo_ghz, table.meta.hi_ghz};
  nlohmann::json rows = nlohmann::json::array();
  for (int k = 0; k < table.n_transmons(); ++k) {
    nlohmann::json row = nlohmann::json::array();
    for (int l = 0; l < table.n_controls(); ++l) row.push_back(table.points_ghz(k, l));
    rows.push_back(std::move(row));
  }
  j["points_ghz"] = std::move(rows);
  return j;
}

inline ControlTable pulse_from_json(const nlohmann::json& j, const std::string& path = "pulse") {
  using detail_io::fail;
  detail_io::check_object(j, path, {"dt_ns", "shape", "sigma_ns", "bounds_ghz", "points_ghz"});
  ControlTable table;
  table.meta.dt_ns = detail_io::number(detail_io::require(j, path, "dt_ns"), path + ".dt_ns");
  table.meta.shape = pulse_shape_from_string(
      detail_io::text(detail_io::require(j, path, "shape"), path + ".shape"), path + ".shape");
  if (j.contains("sigma_ns"))
    table.meta.sigma_ns = detail_io::number(j["sigma_ns"], path + ".sigma_ns");
  const auto& bounds = detail_io::require(j, path, "bounds_ghz");
  if (!bounds.is_array() || bounds.size() != 2) fail(path + ".bounds_ghz", "expected [lo, hi]");
  table.meta.lo_ghz = detail_io::number(bounds[0], path + ".bounds_ghz[0]");
  table.meta.hi_ghz = detail_io::number(bounds[1], path + ".bounds_ghz[1]");
  const auto& rows = detail_io::require(j, path, "points_ghz");
  if (!rows.is_array() || rows.empty()) fail(path + ".points_ghz", "expected a nonempty array of rows");
  const std::size_t n_controls = rows[0].is_array() ? rows[0].size() : 0;
  if (n_controls == 0) fail(path + ".points_ghz[0]", "expected a nonempty array of numbers");
  table.points_ghz.resize(static_cast<Eigen::Index>(rows.size()),
                          static_cast<Eigen::Index>(n_controls));
  for (std::size_t k = 0; k < rows.size(); ++k) {
    if (!rows[k].is_array() || rows[k].size() != n_controls)
      fail(path + ".points_ghz[" + std::to_string(k) + "]", "rows must have equal length");
    for (std::size_t l = 0; l < n_controls; ++l)
      table.points_ghz(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(l)) =
          detail_io::number(rows[k][l], path + ".points_ghz[" + std::to_string(k) + "][" +
                                            std::to_string(l) + "]");
  }
  try {
    table.validate();
  } catch (const std::invalid_argument& e) {
    fail(path, e.what());
  }
  return table;
}

inline nlohmann::json load_json_file(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError(file + ": cannot open file");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(file + ": JSON parse error: " + e.what());
  }
  return j;
}

inline ControlTable load_pulse(const std::string& file) {
  return pulse_from_json(load_json_file(file), file);
}

inline void save_json_file(const std::string& file, const nlohmann::json& j) {
  std::ofstream out(file);
  if (!out) throw std::runtime_error(file + ": cannot open for writing");
  out << j.dump(2) << "\n";
  if (!out) throw std::runtime_error(file + ": write failed");
}

// ---------------------------------------------------------------------------
// Run configuration

struct DecoherenceConfig {
  double t1_us = 25.0;
  double t2_us = 25.0;
};

struct RunConfig {
  std::string label = "run";
  std::string output_dir = "runs";
  TransmonChain chain;
  int n_controls = 26;
  PulseMeta pulse;
  OptimizerConfig optimizer;  ///< bounds filled from pulse.bounds over 3N coordinates
  std::optional<DecoherenceConfig> decoherence;

  void validate() const {
    chain.validate();
    pulse.validate();
    if (n_controls < 1) throw ConfigError("pulse.n_controls: must be >= 1");
    optimizer.validate();
    if (optimizer.dimension() != chain.n_transmons * n_controls)
      throw ConfigError("optimizer.bounds: dimension must equal n_transmons * n_controls");
    if (decoherence) {
      if (!(decoherence->t1_us > 0.0)) throw ConfigError("decoherence.t1_us: must be > 0");
      if (!(decoherence->t2_us > 0.0)) throw ConfigError("decoherence.t2_us: must be > 0");
    }
  }

  /// The fields that determine results (everything except labeling, output
  /// locations, and thread counts), in canonical JSON form.
  nlohmann::json semantic_json() const {
    nlohmann::json chain_j;
    chain_j["n_transmons"] = chain.n_transmons;
    chain_j["n_levels"] = chain.n_levels;
    chain_j["anharmonicity_ghz"] = chain.eta_ghz;
    chain_j["coupling_ghz"] = chain.g_ghz;
    nlohmann::json pulse_j;
    pulse_j["n_controls"] = n_controls;
    pulse_j["dt_ns"] = pulse.dt_ns;
    pulse_j["shape"] = to_string(pulse.shape);
    if (pulse.shape == PulseShape::ErfSmoothed) pulse_j["sigma_ns"] = pulse.sigma_ns;
    pulse_j["bounds_ghz"] = {pulse.lo_ghz, pulse.hi_ghz};
    nlohmann::json opt_j;
    opt_j["population"] = optimizer.population;
    opt_j["switch_s"] = optimizer.switch_s;
    opt_j["subspace_dims"] = optimizer.subspace_dims;
    opt_j["kappa1"] = optimizer.kappa1;
    opt_j["kappa2"] = optimizer.kappa2;
    opt_j["mu_l"] = optimizer.mu_l;
    opt_j["mu_u"] = optimizer.mu_u;
    opt_j["bound_policy"] = optimizer.bound_policy == BoundPolicy::Reflect  ? "reflect"
                            : optimizer.bound_policy == BoundPolicy::Clip ? "clip"
                                                                          : "resample";
    opt_j["seed"] = optimizer.seed;
    if (optimizer.target_fitness) opt_j["target_fitness"] = *optimizer.target_fitness;
    opt_j["max_generations"] = optimizer.max_generations;
    opt_j["max_evaluations"] = optimizer.max_evaluations;
    nlohmann::json j;
    j["chain"] = std::move(chain_j);
    j["pulse"] = std::move(pulse_j);
    j["optimizer"] = std::move(opt_j);
    if (decoherence) j["decoherence"] = {{"t1_us", decoherence->t1_us}, {"t2_us", decoherence->t2_us}};
    return j;
  }
};

inline RunConfig run_config_from_json(const nlohmann::json& j, const std::string& path = "config") {
  using detail_io::fail;
  using detail_io::require;
  detail_io::check_object(j, path,
                          {"label", "output_dir", "chain", "pulse", "optimizer", "decoherence"});
  RunConfig cfg;
  if (j.contains("label")) cfg.label = detail_io::text(j["label"], path + ".label");
  if (j.contains("output_dir")) cfg.output_dir = detail_io::text(j["output_dir"], path + ".output_dir");

  const auto& chain_j = require(j, path, "chain");
  const std::string chain_path = path + ".chain";
  detail_io::check_object(chain_j, chain_path,
                          {"n_transmons", "n_levels", "anharmonicity_ghz", "coupling_ghz"});
  cfg.chain.n_transmons =
      static_cast<int>(detail_io::integer(require(chain_j, chain_path, "n_transmons"), chain_path + ".n_transmons"));
  cfg.chain.n_levels =
      static_cast<int>(detail_io::integer(require(chain_j, chain_path, "n_levels"), chain_path + ".n_levels"));
  if (cfg.chain.n_transmons < 2) fail(chain_path + ".n_transmons", "must be >= 2");
  if (cfg.chain.n_levels < 2) fail(chain_path + ".n_levels", "must be >= 2");
  const auto& eta = require(chain_j, chain_path, "anharmonicity_ghz");
  if (eta.is_number()) {
    const double scale = eta.get<double>();
    cfg.chain.eta_ghz.assign(cfg.chain.n_transmons, std::vector<double>(cfg.chain.n_levels, 0.0));
    for (int k = 0; k < cfg.chain.n_transmons; ++k)
      for (int l = 0; l < cfg.chain.n_levels; ++l)
        cfg.chain.eta_ghz[k][l] = scale * l * (l - 1) / 2.0;
  } else if (eta.is_array()) {
    cfg.chain.eta_ghz.clear();
    for (std::size_t k = 0; k < eta.size(); ++k) {
      const std::string row_path = chain_path + ".anharmonicity_ghz[" + std::to_string(k) + "]";
      if (!eta[k].is_array()) fail(row_path, "expected an array of per-level shifts");
      std::vector<double> row;
      for (std::size_t l = 0; l < eta[k].size(); ++l)
        row.push_back(detail_io::number(eta[k][l], row_path + "[" + std::to_string(l) + "]"));
      cfg.chain.eta_ghz.push_back(std::move(row));
    }
  } else {
    fail(chain_path + ".anharmonicity_ghz", "expected a number (Duffing scale) or per-level table");
  }
  const auto& g = require(chain_j, chain_path, "coupling_ghz");
  if (!g.is_array()) fail(chain_path + ".coupling_ghz", "expected an array");
  cfg.chain.g_ghz.clear();
  for (std::size_t k = 0; k < g.size(); ++k)
    cfg.chain.g_ghz.push_back(detail_io::number(g[k], chain_path + ".coupling_ghz[" + std::to_string(k) + "]"));

  const auto& pulse_j = require(j, path, "pulse");
  const std::string pulse_path = path + ".pulse";
  detail_io::check_object(pulse_j, pulse_path,
                          {"n_controls", "dt_ns", "shape", "sigma_ns", "bounds_ghz"});
  cfg.n_controls = static_cast<int>(
      detail_io::integer(require(pulse_j, pulse_path, "n_controls"), pulse_path + ".n_controls"));
  cfg.pulse.dt_ns = detail_io::number(require(pulse_j, pulse_path, "dt_ns"), pulse_path + ".dt_ns");
  cfg.pulse.shape = pulse_shape_from_string(
      detail_io::text(require(pulse_j, pulse_path, "shape"), pulse_path + ".shape"),
      pulse_path + ".shape");
  if (pulse_j.contains("sigma_ns"))
    cfg.pulse.sigma_ns = detail_io::number(pulse_j["sigma_ns"], pulse_path + ".sigma_ns");
  const auto& bounds = require(pulse_j, pulse_path, "bounds_ghz");
  if (!bounds.is_array() || bounds.size() != 2) fail(pulse_path + ".bounds_ghz", "expected [lo, hi]");
  cfg.pulse.lo_ghz = detail_io::number(bounds[0], pulse_path + ".bounds_ghz[0]");
  cfg.pulse.hi_ghz = detail_io::number(bounds[1], pulse_path + ".bounds_ghz[1]");

  const auto& opt_j = require(j, path, "optimizer");
  const std::string opt_path = path + ".optimizer";
  detail_io::check_object(opt_j, opt_path,
                          {"population", "switch_s", "subspace_dims", "kappa1", "kappa2", "mu_l",
                           "mu_u", "bound_policy", "seed", "target_fitness", "max_generations",
                           "max_evaluations", "threads"});
  OptimizerConfig& opt = cfg.optimizer;
  if (opt_j.contains("population"))
    opt.population = static_cast<int>(detail_io::integer(opt_j["population"], opt_path + ".population"));
  if (opt_j.contains("switch_s")) opt.switch_s = detail_io::number(opt_j["switch_s"], opt_path + ".switch_s");
  if (opt_j.contains("subspace_dims")) {
    if (!opt_j["subspace_dims"].is_array()) fail(opt_path + ".subspace_dims", "expected an array");
    opt.subspace_dims.clear();
    for (std::size_t i = 0; i < opt_j["subspace_dims"].size(); ++i)
      opt.subspace_dims.push_back(static_cast<int>(detail_io::integer(
          opt_j["subspace_dims"][i], opt_path + ".subspace_dims[" + std::to_string(i) + "]")));
  }
  if (opt_j.contains("kappa1")) opt.kappa1 = detail_io::number(opt_j["kappa1"], opt_path + ".kappa1");
  if (opt_j.contains("kappa2")) opt.kappa2 = detail_io::number(opt_j["kappa2"], opt_path + ".kappa2");
  if (opt_j.contains("mu_l")) opt.mu_l = detail_io::number(opt_j["mu_l"], opt_path + ".mu_l");
  if (opt_j.contains("mu_u")) opt.mu_u = detail_io::number(opt_j["mu_u"], opt_path + ".mu_u");
  if (opt_j.contains("bound_policy")) {
    const std::string policy = detail_io::text(opt_j["bound_policy"], opt_path + ".bound_policy");
    if (policy == "reflect") opt.bound_policy = BoundPolicy::Reflect;
    else if (policy == "clip") opt.bound_policy = BoundPolicy::Clip;
    else if (policy == "resample") opt.bound_policy = BoundPolicy::Resample;
    else fail(opt_path + ".bound_policy", "expected \"reflect\", \"clip\", or \"resample\"");
  }
  if (opt_j.contains("seed")) {
    if (!opt_j["seed"].is_number_integer()) fail(opt_path + ".seed", "expected an integer");
    opt.seed = opt_j["seed"].get<std::uint64_t>();
  }
  if (opt_j.contains("target_fitness"))
    opt.target_fitness = detail_io::number(opt_j["target_fitness"], opt_path + ".target_fitness");
  if (opt_j.contains("max_generations"))
    opt.max_generations = detail_io::integer(opt_j["max_generations"], opt_path + ".max_generations");
  if (opt_j.contains("max_evaluations"))
    opt.max_evaluations = detail_io::integer(opt_j["max_evaluations"], opt_path + ".max_evaluations");
  if (opt_j.contains("threads"))
    opt.threads = static_cast<unsigned>(detail_io::integer(opt_j["threads"], opt_path + ".threads"));

  const int dim = cfg.chain.n_transmons * cfg.n_controls;
  opt.lo = OptimizerConfig::box(dim, cfg.pulse.lo_ghz);
  opt.hi = OptimizerConfig::box(dim, cfg.pulse.hi_ghz);

  if (j.contains("decoherence")) {
    const std::string dec_path = path + ".decoherence";
    detail_io::check_object(j["decoherence"], dec_path, {"t1_us", "t2_us"});
    DecoherenceConfig dec;
    dec.t1_us = detail_io::number(require(j["decoherence"], dec_path, "t1_us"), dec_path + ".t1_us");
    dec.t2_us = detail_io::number(require(j["decoherence"], dec_path, "t2_us"), dec_path + ".t2_us");
    cfg.decoherence = dec;
  }

  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    fail(path, e.what());
  }
  return cfg;
}

inline RunConfig load_run_config(const std::string& file) {
  return run_config_from_json(load_json_file(file), file);
}

// ---------------------------------------------------------------------------
// Hashing and text output

/// FNV-1a over the canonical semantic JSON; stable across platforms.
inline std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

inline std::string config_hash_hex(const RunConfig& cfg) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a64(cfg.semantic_json().dump())));
  return buf;
}

/// Shortest exact decimal form of a double (17 significant digits).
inline std::string format_g17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline void write_trace_csv(std::ostream& out, const std::vector<TracePoint>& trace) {
  out << "generation,evaluations,best_fitness,mean_fitness\n";
  for (const auto& p : trace)
    out << p.generation << ',' << p.evaluations << ',' << format_g17(p.best_fitness) << ','
        << format_g17(p.mean_fitness) << '\n';
}

}  // namespace cczpulse
