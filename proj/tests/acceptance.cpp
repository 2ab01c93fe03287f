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

// End-to-end acceptance suite. Each criterion prints exactly one PASS/FAIL
// line; the process exits nonzero if any executed criterion fails.
//
//   acceptance                 runs 1,2,3,4,6,7 (the fast set)
//   acceptance --criteria 5    runs the long pulse-design reproduction
//   acceptance --data DIR      overrides the stored-pulse directory
//
// Criterion 5 re-optimizes the 26 ns CCZ pulse from scratch (up to 2e5
// objective evaluations per seed) and is therefore excluded from the
// default test pass; see the README for how to run it.

#include <chrono>
#include <cstring>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "cczpulse/benchmarks.hpp"
#include "cczpulse/decoherence.hpp"
#include "cczpulse/fidelity.hpp"
#include "cczpulse/io.hpp"
#include "cczpulse/sussade.hpp"
#include "minimal_de.hpp"
#include "test_support.hpp"

using namespace cczpulse;

namespace {

#ifndef CCZPULSE_TEST_DATA_DIR
#define CCZPULSE_TEST_DATA_DIR "tests/data"
#endif

std::string g_data_dir = CCZPULSE_TEST_DATA_DIR;

struct Criterion {
  int id;
  std::string name;
  bool (*run)(std::string& detail);
};

double completeness_residual(const KrausFamily& fam) {
  const int d = static_cast<int>(fam.matrices.front().rows());
  Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(d, d);
  for (const auto& k : fam.matrices) sum += k.adjoint() * k;
  return (sum - Eigen::MatrixXcd::Identity(d, d)).cwiseAbs().maxCoeff();
}

OptimizerConfig ccz_optimizer(int dim, std::uint64_t seed, long budget, double target) {
  OptimizerConfig cfg;
  cfg.lo = OptimizerConfig::box(dim, -2.5);
  cfg.hi = OptimizerConfig::box(dim, 2.5);
  cfg.seed = seed;
  cfg.target_fitness = target;
  cfg.max_evaluations = budget;
  cfg.threads = 0;
  return cfg;
}

// --- criterion 1 -----------------------------------------------------------

bool criterion_unitarity(std::string& detail) {
  const TransmonChain chain = test::reference_chain();
  std::mt19937_64 gen(101);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const bool erf = trial % 2 == 1;
    const int n_controls =
        erf ? 1 + static_cast<int>(rng::below(gen, 6)) : 1 + static_cast<int>(rng::below(gen, 26));
    const ControlTable table = test::random_table(
        gen, erf ? PulseShape::ErfSmoothed : PulseShape::PiecewiseConstant, n_controls);
    const Eigen::MatrixXcd u = propagate(chain, table).u_full;
    const double residual =
        (u.adjoint() * u - Eigen::MatrixXcd::Identity(64, 64)).cwiseAbs().maxCoeff();
    worst = std::max(worst, residual);
  }
  std::ostringstream os;
  os << "max |U^dag U - 1| = " << worst << " over 100 random tables, both shapes";
  detail = os.str();
  return worst < 1e-10;
}

// --- criterion 2 -----------------------------------------------------------

bool criterion_kraus_completeness(std::string& detail) {
  std::ostringstream os;
  bool pass = true;

  double worst_amp = 0.0;
  for (const double ratio : {1e-5, 1e-4, 1e-3, 1e-2, 1e-1})
    worst_amp = std::max(worst_amp, completeness_residual(amplitude_kraus(ratio * 1e3, 1.0)));
  os << "amplitude residual " << worst_amp << " (limit 1e-12)";
  pass = pass && worst_amp < 1e-12;

  os << "; phase residuals";
  for (const double ratio : {1e-5, 1e-4, 1e-3, 1e-2}) {
    const double residual = completeness_residual(phase_kraus(ratio * 1e3, 1.0));
    os << " " << residual << " @" << ratio;
    if (residual >= 1e-9) {
      pass = false;
      os << " EXCEEDS 1e-9 (truncated-series tail ~ (9*step/T2)^4/24; the 1e-9 level holds only "
            "for step/T2 <= ~1.4e-3)";
    }
  }
  detail = os.str();
  return pass;
}

// --- criterion 3 -----------------------------------------------------------

bool criterion_fidelity_oracle(std::string& detail) {
  bool pass = true;
  std::ostringstream os;

  const double f_ideal = intrinsic_fidelity(target_ccz(CompensationPhases{}), CompensationPhases{});
  pass = pass && std::abs(f_ideal - 1.0) < 1e-12;

  const double f_identity =
      intrinsic_fidelity(Eigen::MatrixXcd::Identity(8, 8), CompensationPhases{});
  pass = pass && std::abs(f_identity - 0.75) < 1e-12;

  std::mt19937_64 gen(303);
  double worst_drift = 0.0;
  for (int trial = 0; trial < 25; ++trial) {
    const Eigen::MatrixXcd u = test::random_unitary(gen, 8);
    const double f_before = intrinsic_fidelity(u, extract_phases(u));
    Eigen::MatrixXcd z = Eigen::MatrixXcd::Zero(8, 8);
    const double d1 = rng::uniform(gen, -3.0, 3.0), d2 = rng::uniform(gen, -3.0, 3.0),
                 d3 = rng::uniform(gen, -3.0, 3.0);
    for (int b = 0; b < 8; ++b) {
      double phase = 0.0;
      if (b & 4) phase += d1;
      if (b & 2) phase += d2;
      if (b & 1) phase += d3;
      z(b, b) = std::exp(Complex(0.0, phase));
    }
    const Eigen::MatrixXcd rotated = z * u;
    worst_drift = std::max(
        worst_drift, std::abs(f_before - intrinsic_fidelity(rotated, extract_phases(rotated))));
  }
  pass = pass && worst_drift < 1e-12;

  os << "ideal CCZ F - 1 = " << f_ideal - 1.0 << ", identity F - 0.75 = " << f_identity - 0.75
     << ", max compensation drift = " << worst_drift;
  detail = os.str();
  return pass;
}

// --- criterion 4 -----------------------------------------------------------

bool criterion_optimizer_sanity(std::string& detail) {
  const BenchmarkObjective sphere = sphere_benchmark();
  std::ostringstream os;

  int solved = 0;
  os << "sphere-78 best by seed:";
  for (const std::uint64_t seed : {1, 2, 3}) {
    OptimizerConfig cfg;
    cfg.lo = OptimizerConfig::box(78, sphere.lo);
    cfg.hi = OptimizerConfig::box(78, sphere.hi);
    cfg.seed = seed;
    cfg.max_evaluations = 100000;
    cfg.threads = 1;
    const OptimizeResult r = optimize(sphere.value, cfg);
    os << " " << r.best.fitness;
    if (std::abs(r.best.fitness) < 1e-6) ++solved;
  }
  const bool sphere_ok = solved >= 2;
  os << " (" << solved << "/3 under 1e-6)";

  // Textbook-DE equivalence: subspace breeding and adaptation off.
  const int dim = 10, pop = 12, generations = 40;
  OptimizerConfig plain;
  plain.lo = OptimizerConfig::box(dim, sphere.lo);
  plain.hi = OptimizerConfig::box(dim, sphere.hi);
  plain.population = pop;
  plain.switch_s = 0.0;
  plain.kappa1 = 0.0;
  plain.kappa2 = 0.0;
  plain.seed = 20202;
  plain.max_generations = generations;
  plain.threads = 1;
  const OptimizeResult mine = optimize(sphere.value, plain);
  const test::MiniDeState reference =
      test::run_minimal_de(sphere.value, dim, pop, sphere.lo, sphere.hi, 20202, generations);
  bool identical = mine.trace.size() == reference.trace.size();
  for (std::size_t i = 0; identical && i < mine.trace.size(); ++i)
    identical = mine.trace[i].best_fitness == reference.trace[i].best &&
                mine.trace[i].mean_fitness == reference.trace[i].mean &&
                mine.trace[i].evaluations == reference.trace[i].evaluations;
  os << "; reference-DE trace " << (identical ? "bit-identical" : "DIVERGES");

  detail = os.str();
  return sphere_ok && identical;
}

// --- criterion 5 -----------------------------------------------------------

bool criterion_headline(std::string& detail) {
  const TransmonChain chain = test::reference_chain(0.03);
  PulseMeta meta;  // 26 x 1 ns piecewise-constant controls in +-2.5 GHz
  const auto objective = make_ccz_objective(chain, meta);
  std::ostringstream os;
  os << "26 ns / 30 MHz pulse design:";
  bool reached = false;
  for (const std::uint64_t seed : {1, 2, 3}) {
    const OptimizeResult r = optimize(objective, ccz_optimizer(78, seed, 200000, 0.999));
    os << " seed " << seed << " F=" << r.best.fitness << " (" << r.evaluations << " evals)";
    if (r.target_reached || r.best.fitness >= 0.999) {
      reached = true;
      break;
    }
  }
  detail = os.str();
  return reached;
}

// --- criterion 6 -----------------------------------------------------------

bool criterion_decoherence_scale(std::string& detail) {
  const std::string pulse_path = g_data_dir + "/optimal_pulse_26ns.json";
  const ControlTable pulse = load_pulse(pulse_path);
  const TransmonChain chain = test::reference_chain(0.03);
  std::ostringstream os;

  const EvolutionResult evo = propagate(chain, pulse);
  const double f = intrinsic_fidelity(evo.u_comp, extract_phases(evo.u_comp));
  os << "stored pulse F = " << f;
  bool pass = f >= 0.999;

  const double theta_ns = pulse.duration_ns();
  const double t_us = 25.0;
  const double fbar = average_state_fidelity(chain, pulse, t_us, t_us);
  const double loss = 1.0 - fbar;
  const double scale = theta_ns / (t_us * 1e3);
  os << "; 1 - Fbar = " << loss << " at T = 25 us, Theta/T = " << scale;
  pass = pass && loss >= scale / 3.0 && loss <= 3.0 * scale;

  os << "; Fbar over T:";
  double previous = 0.0;
  bool monotone = true;
  for (const double t : {5.0, 10.0, 20.0, 40.0, 60.0}) {
    const double value = average_state_fidelity(chain, pulse, t, t);
    os << " " << value;
    monotone = monotone && value >= previous;
    previous = value;
  }
  pass = pass && monotone;
  if (!monotone) os << " NOT MONOTONE";

  detail = os.str();
  return pass;
}

// --- criterion 7 -----------------------------------------------------------

bool criterion_fidelity_trend(std::string& detail) {
  const TransmonChain chain = test::reference_chain(0.03);
  std::ostringstream os;
  os << "best F by gate time (matched 12k-evaluation budgets):";
  std::vector<double> best;
  for (const int theta_ns : {20, 23, 26}) {
    PulseMeta meta;
    const auto objective = make_ccz_objective(chain, meta);
    const OptimizeResult r =
        optimize(objective, ccz_optimizer(3 * theta_ns, 7, 12000, 2.0 /* never reached */));
    best.push_back(r.best.fitness);
    os << " " << theta_ns << "ns=" << r.best.fitness;
  }
  bool nondecreasing = true;
  for (std::size_t i = 1; i < best.size(); ++i)
    nondecreasing = nondecreasing && best[i] >= best[i - 1] - 1e-3;
  detail = os.str();
  return nondecreasing;
}

const std::vector<Criterion> kCriteria = {
    {1, "unitarity of random-pulse propagation", criterion_unitarity},
    {2, "Kraus family completeness", criterion_kraus_completeness},
    {3, "fidelity oracle and phase compensation", criterion_fidelity_oracle},
    {4, "optimizer sanity on the 78-dim sphere", criterion_optimizer_sanity},
    {5, "26 ns CCZ pulse reaches F >= 0.999", criterion_headline},
    {6, "decoherence scale and monotonicity", criterion_decoherence_scale},
    {7, "fidelity trend over gate time", criterion_fidelity_trend},
};

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> selected = {1, 2, 3, 4, 6, 7};
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--criteria") == 0 && i + 1 < argc) {
      selected.clear();
      std::stringstream ss(argv[++i]);
      std::string item;
      while (std::getline(ss, item, ',')) selected.push_back(std::stoi(item));
    } else if (std::strcmp(argv[i], "--data") == 0 && i + 1 < argc) {
      g_data_dir = argv[++i];
    } else {
      std::cerr << "usage: acceptance [--criteria 1,2,...] [--data DIR]\n";
      return 2;
    }
  }

  int failures = 0;
  for (const Criterion& criterion : kCriteria) {
    bool wanted = false;
    for (int id : selected) wanted = wanted || id == criterion.id;
    if (!wanted) continue;
    const auto t0 = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = false;
    try {
      ok = criterion.run(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::cout << "[" << criterion.id << "] " << criterion.name << ": "
              << (ok ? "PASS" : "FAIL") << " (" << detail << ") [" << seconds << " s]"
              << std::endl;
    failures += !ok;
  }
  return failures == 0 ? 0 : 1;
}
