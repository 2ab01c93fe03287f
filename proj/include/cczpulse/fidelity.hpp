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

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "cczpulse/errors.hpp"
#include "cczpulse/propagator.hpp"

namespace cczpulse {

// Scoring of a projected evolution against the CCZ target
// diag(1, ..., 1, -1), up to one free z-phase per transmon. Such phases are
// free on frequency-tunable transmons (a z-rotation is just a frequency
// excursion), so the target is widened to
//   diag(1, e^{i t3}, e^{i t2}, e^{i(t2+t3)}, e^{i t1}, e^{i(t1+t3)},
//        e^{i(t1+t2)}, -e^{i(t1+t2+t3)}).

/// One compensation phase per transmon, each normalized to (-pi, pi].
struct CompensationPhases {
  std::array<double, 3> theta{0.0, 0.0, 0.0};
};

/// Maps any angle to the representative in (-pi, pi].
inline double normalize_phase(double angle) {
  const double two_pi = 2.0 * std::numbers::pi;
  double a = std::remainder(angle, two_pi);  // (-pi, pi] up to the -pi edge
  if (a <= -std::numbers::pi) a += two_pi;
  return a;
}

/// Phase-compensated CCZ target in the computational basis.
inline Eigen::MatrixXcd target_ccz(const CompensationPhases& phases) {
  Eigen::MatrixXcd target = Eigen::MatrixXcd::Zero(8, 8);
  for (int b = 0; b < 8; ++b) {
    double phase = 0.0;
    if (b & 4) phase += phases.theta[0];
    if (b & 2) phase += phases.theta[1];
    if (b & 1) phase += phases.theta[2];
    const double sign = (b == 7) ? -1.0 : 1.0;
    target(b, b) = sign * std::exp(Complex(0.0, phase));
  }
  return target;
}

/// Reads the compensation phases off the single-excitation diagonal entries
/// <100|U|100>, <010|U|010>, <001|U|001>.
inline CompensationPhases extract_phases(const Eigen::MatrixXcd& u_comp) {
  if (u_comp.rows() != 8 || u_comp.cols() != 8)
    throw std::invalid_argument("extract_phases: expected an 8x8 computational-subspace matrix");
  CompensationPhases phases;
  const std::array<int, 3> single_excitation = {4, 2, 1};  // |100>, |010>, |001>
  for (int j = 0; j < 3; ++j) {
    const Complex entry = u_comp(single_excitation[j], single_excitation[j]);
    if (std::abs(entry) < 1e-12)
      throw DegeneratePhaseError("extract_phases: single-excitation diagonal entry is zero");
    phases.theta[j] = normalize_phase(std::arg(entry));
  }
  return phases;
}

/// Intrinsic fidelity F = |Tr(target^dag * u_comp)| / 8. Sub-unitary
/// projections are scored as-is, so leakage out of the computational
/// subspace lowers F.
inline double intrinsic_fidelity(const Eigen::MatrixXcd& u_comp, const CompensationPhases& phases) {
  if (u_comp.rows() != 8 || u_comp.cols() != 8)
    throw std::invalid_argument("intrinsic_fidelity: expected an 8x8 matrix");
  Complex trace = 0.0;
  const Eigen::MatrixXcd target = target_ccz(phases);
  for (int b = 0; b < 8; ++b) trace += std::conj(target(b, b)) * u_comp(b, b);
  // Off-diagonal entries of u_comp cannot contribute against a diagonal
  // target; the trace above is the full Tr(target^dag u_comp).
  return std::abs(trace) / 8.0;
}

/// Coordinate-descent refinement of the compensation phases: per coordinate
/// a 32-point grid over (-pi, pi] followed by a golden-section polish.
/// Useful far from the target, where the diagonal-entry extraction is only
/// a heuristic.
inline CompensationPhases refine_phases(const Eigen::MatrixXcd& u_comp,
                                        CompensationPhases initial) {
  const double two_pi = 2.0 * std::numbers::pi;
  constexpr int kGrid = 32;
  constexpr double kGolden = 0.6180339887498949;  // (sqrt(5)-1)/2

  auto score = [&](const CompensationPhases& p) { return intrinsic_fidelity(u_comp, p); };

  CompensationPhases best = initial;
  double best_f = score(best);
  for (int sweep = 0; sweep < 4; ++sweep) {
    const double before = best_f;
    for (int j = 0; j < 3; ++j) {
      CompensationPhases probe = best;
      double grid_best = best.theta[j];
      double grid_best_f = best_f;
      for (int g = 0; g < kGrid; ++g) {
        probe.theta[j] = -std::numbers::pi + (g + 1) * two_pi / kGrid;
        const double f = score(probe);
        if (f > grid_best_f) {
          grid_best_f = f;
          grid_best = probe.theta[j];
        }
      }
      double lo = grid_best - two_pi / kGrid;
      double hi = grid_best + two_pi / kGrid;
      double x1 = hi - kGolden * (hi - lo);
      double x2 = lo + kGolden * (hi - lo);
      probe.theta[j] = x1;
      double f1 = score(probe);
      probe.theta[j] = x2;
      double f2 = score(probe);
      while (hi - lo > 1e-10) {
        if (f1 < f2) {
          lo = x1;
          x1 = x2;
          f1 = f2;
          x2 = lo + kGolden * (hi - lo);
          probe.theta[j] = x2;
          f2 = score(probe);
        } else {
          hi = x2;
          x2 = x1;
          f2 = f1;
          x1 = hi - kGolden * (hi - lo);
          probe.theta[j] = x1;
          f1 = score(probe);
        }
      }
      probe.theta[j] = normalize_phase(0.5 * (lo + hi));
      const double f = score(probe);
      if (f > best_f) {
        best_f = f;
        best = probe;
      }
    }
    if (best_f - before < 1e-14) break;
  }
  return best;
}

struct ObjectiveOptions {
  bool refine_phases = false;       ///< polish phases beyond diagonal extraction
  int n_sub = kDefaultSubsteps;     ///< substeps per interval for erf pulses
};

/// The optimizer's scalar objective: propagate, compensate phases, score.
/// Falls back to zero phases when an extraction entry is degenerate.
inline double fidelity_objective(const TransmonChain& chain, const ControlTable& table,
                                 const ObjectiveOptions& opts = {}) {
  const EvolutionResult evo = propagate(chain, table, opts.n_sub);
  CompensationPhases phases;
  try {
    phases = extract_phases(evo.u_comp);
  } catch (const DegeneratePhaseError&) {
    phases = CompensationPhases{};
  }
  if (opts.refine_phases) phases = refine_phases(evo.u_comp, phases);
  return intrinsic_fidelity(evo.u_comp, phases);
}

/// Packages the CCZ design problem as a genome -> fitness callback. The
/// callback is pure and safe to evaluate from many threads at once.
inline auto make_ccz_objective(TransmonChain chain, PulseMeta meta, ObjectiveOptions opts = {}) {
  chain.validate();
  meta.validate();
  return [chain = std::move(chain), meta, opts](const Eigen::VectorXd& genome) {
    const ControlTable table = ControlTable::from_genome(genome, chain.n_transmons, meta);
    return fidelity_objective(chain, table, opts);
  };
}

}  // namespace cczpulse
