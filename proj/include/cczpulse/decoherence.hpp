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
#include <cmath>
#include <stdexcept>
#include <vector>

#include "cczpulse/parallel.hpp"
#include "cczpulse/propagator.hpp"

namespace cczpulse {

// Open-system scoring: each transmon is damped independently as a lossy
// anharmonic oscillator with relaxation time T1 (amplitude damping) and
// dephasing time T2 (phase damping). Channels act per control segment via
// single-transmon Kraus families; applying them transmon by transmon equals
// the full tensor-product operator sum because the noise is independent.

enum class DampingProcess {
  AmplitudeDamping,
  PhaseDamping,
};

/// Kraus matrices of one damping process on one transmon over one step.
struct KrausFamily {
  DampingProcess process;
  double step_ns = 0.0;
  std::vector<Eigen::MatrixXcd> matrices;  ///< index l, one per possible loss count
  /// Phase damping keeps only l <= n_levels-1 of an infinite series; the
  /// omitted tail is negligible iff step/T2 is small. Amplitude damping is
  /// exactly complete, so this is always true there.
  bool truncation_valid = true;
};

namespace detail {
inline double binomial(int n, int k) {
  double c = 1.0;
  for (int i = 1; i <= k; ++i) c *= static_cast<double>(n - k + i) / i;
  return c;
}
constexpr double kNsPerUs = 1e3;
}  // namespace detail

/// Amplitude-damping family E_l, l = 0..n_levels-1, with
/// E_l[j-l][j] = sqrt(C(j,l)) * gamma^{(j-l)/2} * (1-gamma)^{l/2},
/// gamma = exp(-t/T1). Complete (sum E^dag E = 1) at every t.
inline KrausFamily amplitude_kraus(double t_ns, double t1_us, int n_levels = 4) {
  if (!(t_ns >= 0.0)) throw std::invalid_argument("amplitude_kraus: t must be >= 0");
  if (!(t1_us > 0.0)) throw std::invalid_argument("amplitude_kraus: T1 must be > 0");
  if (n_levels < 2) throw std::invalid_argument("amplitude_kraus: need at least 2 levels");
  const double gamma = std::exp(-t_ns / (t1_us * detail::kNsPerUs));
  KrausFamily fam;
  fam.process = DampingProcess::AmplitudeDamping;
  fam.step_ns = t_ns;
  fam.matrices.reserve(static_cast<std::size_t>(n_levels));
  for (int l = 0; l < n_levels; ++l) {
    Eigen::MatrixXcd e = Eigen::MatrixXcd::Zero(n_levels, n_levels);
    for (int j = l; j < n_levels; ++j) {
      e(j - l, j) = std::sqrt(detail::binomial(j, l)) *
                    std::pow(gamma, (j - l) / 2.0) * std::pow(1.0 - gamma, l / 2.0);
    }
    fam.matrices.push_back(std::move(e));
  }
  return fam;
}

/// Phase-damping family, diagonal matrices
/// E_l[j][j] = exp(-j^2 t / (2 T2)) * sqrt((j^2 t / T2)^l / l!),
/// truncated at l = n_levels-1. The dropped tail per level is the Poisson
/// tail P(X >= n_levels) with rate j^2 t/T2, so the family is complete only
/// for steps much shorter than T2; truncation_valid flags step/T2 <= 1e-2.
inline KrausFamily phase_kraus(double t_ns, double t2_us, int n_levels = 4) {
  if (!(t_ns >= 0.0)) throw std::invalid_argument("phase_kraus: t must be >= 0");
  if (!(t2_us > 0.0)) throw std::invalid_argument("phase_kraus: T2 must be > 0");
  if (n_levels < 2) throw std::invalid_argument("phase_kraus: need at least 2 levels");
  const double ratio = t_ns / (t2_us * detail::kNsPerUs);
  KrausFamily fam;
  fam.process = DampingProcess::PhaseDamping;
  fam.step_ns = t_ns;
  fam.truncation_valid = ratio <= 1e-2;
  double l_factorial = 1.0;
  for (int l = 0; l < n_levels; ++l) {
    if (l > 0) l_factorial *= l;
    Eigen::MatrixXcd e = Eigen::MatrixXcd::Zero(n_levels, n_levels);
    for (int j = 0; j < n_levels; ++j) {
      const double rate = static_cast<double>(j) * j * ratio;
      e(j, j) = std::exp(-rate / 2.0) * std::sqrt(std::pow(rate, l) / l_factorial);
    }
    fam.matrices.push_back(std::move(e));
  }
  return fam;
}

/// Applies a single-transmon Kraus family to one site of the chain:
/// rho' = sum_l (1 x ... K_l ... x 1) rho (...)^dag.
inline Eigen::MatrixXcd apply_channel(const Eigen::MatrixXcd& rho, const KrausFamily& fam,
                                      int transmon, int n_transmons) {
  if (fam.matrices.empty()) throw std::invalid_argument("apply_channel: empty Kraus family");
  const int n_levels = static_cast<int>(fam.matrices.front().rows());
  if (transmon < 0 || transmon >= n_transmons)
    throw std::invalid_argument("apply_channel: transmon index out of range");
  int dim = 1;
  for (int k = 0; k < n_transmons; ++k) dim *= n_levels;
  if (rho.rows() != dim || rho.cols() != dim)
    throw std::invalid_argument("apply_channel: density matrix dimension mismatch");
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& k : fam.matrices) {
    const Eigen::MatrixXcd embedded = embed_single_site(k, transmon, n_transmons, n_levels);
    out.noalias() += embedded * rho * embedded.adjoint();
  }
  return out;
}

enum class ChannelOrder {
  AmplitudeThenPhase,  ///< default splitting within each segment
  PhaseThenAmplitude,  ///< swap used to bound the splitting error
};

struct OpenEvolutionOptions {
  int n_sub = kDefaultSubsteps;
  ChannelOrder order = ChannelOrder::AmplitudeThenPhase;
  unsigned threads = 0;       ///< 0 = hardware; basis states evolve independently
  bool sqrt_overlap = true;   ///< false selects the squared (standard) variant
};

/// Evolves each computational basis projector through the pulse with
/// decoherence: per segment the segment unitary, then amplitude damping on
/// every transmon, then phase damping on every transmon (order per
/// options), each over one segment duration. Returns the 2^n final density
/// matrices in computational-basis order.
inline std::vector<Eigen::MatrixXcd> evolve_open(const TransmonChain& chain,
                                                 const ControlTable& table, double t1_us,
                                                 double t2_us,
                                                 const OpenEvolutionOptions& opts = {}) {
  const std::vector<Eigen::MatrixXcd> segments = segment_unitaries(chain, table, opts.n_sub);
  const KrausFamily amp = amplitude_kraus(table.meta.dt_ns, t1_us, chain.n_levels);
  const KrausFamily phase = phase_kraus(table.meta.dt_ns, t2_us, chain.n_levels);

  // Embed every Kraus matrix once; each channel application is then a plain
  // operator sum in the full space.
  std::vector<std::vector<Eigen::MatrixXcd>> amp_ops(chain.n_transmons), phase_ops(chain.n_transmons);
  for (int k = 0; k < chain.n_transmons; ++k) {
    for (const auto& m : amp.matrices)
      amp_ops[k].push_back(embed_single_site(m, k, chain.n_transmons, chain.n_levels));
    for (const auto& m : phase.matrices)
      phase_ops[k].push_back(embed_single_site(m, k, chain.n_transmons, chain.n_levels));
  }

  auto apply_ops = [](const std::vector<Eigen::MatrixXcd>& ops, const Eigen::MatrixXcd& rho) {
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(rho.rows(), rho.cols());
    for (const auto& op : ops) out.noalias() += op * rho * op.adjoint();
    return out;
  };

  const auto comp = comp_subspace_indices(chain.n_transmons, chain.n_levels);
  std::vector<Eigen::MatrixXcd> finals(comp.size());
  parallel_for(comp.size(), opts.threads, [&](std::size_t b) {
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(chain.dim(), chain.dim());
    rho(comp[b], comp[b]) = 1.0;
    for (const auto& u : segments) {
      rho = u * rho * u.adjoint();
      if (opts.order == ChannelOrder::AmplitudeThenPhase) {
        for (int k = 0; k < chain.n_transmons; ++k) rho = apply_ops(amp_ops[k], rho);
        for (int k = 0; k < chain.n_transmons; ++k) rho = apply_ops(phase_ops[k], rho);
      } else {
        for (int k = 0; k < chain.n_transmons; ++k) rho = apply_ops(phase_ops[k], rho);
        for (int k = 0; k < chain.n_transmons; ++k) rho = apply_ops(amp_ops[k], rho);
      }
    }
    finals[b] = std::move(rho);
  });
  return finals;
}

/// Average state fidelity: mean over computational basis states of
/// sqrt(|<psi_k| rho_k |psi_k>|). Every basis projector is invariant under
/// an ideal CCZ, so this directly scores the open evolution against the
/// gate. sqrt_overlap=false drops the square root (diagnostic variant).
inline double average_state_fidelity(const TransmonChain& chain, const ControlTable& table,
                                     double t1_us, double t2_us,
                                     const OpenEvolutionOptions& opts = {}) {
  const auto finals = evolve_open(chain, table, t1_us, t2_us, opts);
  const auto comp = comp_subspace_indices(chain.n_transmons, chain.n_levels);
  double total = 0.0;
  for (std::size_t b = 0; b < comp.size(); ++b) {
    const double overlap = std::abs(finals[b](comp[b], comp[b]));
    total += opts.sqrt_overlap ? std::sqrt(overlap) : overlap;
  }
  return total / static_cast<double>(comp.size());
}

}  // namespace cczpulse
