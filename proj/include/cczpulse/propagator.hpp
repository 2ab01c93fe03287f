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
#include <numbers>
#include <stdexcept>
#include <vector>

#include "cczpulse/hamiltonian.hpp"
#include "cczpulse/pulses.hpp"

namespace cczpulse {

/// Substeps per control interval used to resolve time-varying (erf) pulses.
/// Each substep is integrated with a fourth-order commutator-free scheme
/// (two Gauss-node exponentials); the default is validated by the
/// substep-halving convergence test.
inline constexpr int kDefaultSubsteps = 32;

/// Outcome of one time-ordered evolution. u_comp is the plain row/column
/// extraction of u_full onto the computational subspace (not re-unitarized),
/// ordered |000>, |001>, ..., |111>.
struct EvolutionResult {
  Eigen::MatrixXcd u_full;
  Eigen::MatrixXcd u_comp;
};

/// Full-space indices of the computational (all levels in {0,1}) subspace,
/// ordered by the binary value of the qubit string. For the 3 x 4-level
/// chain: {0, 1, 4, 5, 16, 17, 20, 21}.
inline std::vector<int> comp_subspace_indices(int n_transmons, int n_levels) {
  std::vector<int> indices;
  indices.reserve(1u << n_transmons);
  for (int b = 0; b < (1 << n_transmons); ++b) {
    int idx = 0;
    for (int k = 0; k < n_transmons; ++k) {
      idx *= n_levels;
      idx += (b >> (n_transmons - 1 - k)) & 1;
    }
    indices.push_back(idx);
  }
  return indices;
}

/// Basis indices grouped by total excitation number j1+...+jn. The chain
/// Hamiltonian is block diagonal in these sectors: the detuning and
/// anharmonicity terms are diagonal and the XY coupling only moves one
/// excitation between neighbors.
inline std::vector<std::vector<int>> excitation_sectors(int n_transmons, int n_levels) {
  const int max_total = n_transmons * (n_levels - 1);
  std::vector<std::vector<int>> sectors(max_total + 1);
  int dim = 1;
  for (int k = 0; k < n_transmons; ++k) dim *= n_levels;
  for (int idx = 0; idx < dim; ++idx) {
    int total = 0;
    int rest = idx;
    for (int k = 0; k < n_transmons; ++k) {
      total += rest % n_levels;
      rest /= n_levels;
    }
    sectors[total].push_back(idx);
  }
  return sectors;
}

/// exp(-i * phase_scale * H) for Hermitian H via eigendecomposition.
inline Eigen::MatrixXcd expm_hermitian(const Eigen::MatrixXcd& h, double phase_scale) {
  if (h.rows() != h.cols()) throw std::invalid_argument("expm_hermitian: matrix must be square");
  if ((h - h.adjoint()).cwiseAbs().maxCoeff() > 1e-10)
    throw std::invalid_argument("expm_hermitian: matrix is not Hermitian");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
  const Eigen::VectorXcd phases =
      (Complex(0.0, -phase_scale) * es.eigenvalues().array()).exp().matrix();
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

namespace detail {

/// Shared core of propagate() and segment_unitaries(): walks the control
/// segments in time order and hands the per-sector unitary of each whole
/// segment to the sink. Working sector-by-sector keeps the eigensolves at
/// the physical block sizes (at most 12 for the 3 x 4-level chain) instead
/// of the full 64.
template <typename Sink>
void scan_segment_unitaries(const TransmonChain& chain, const ControlTable& table, int n_sub,
                            Sink&& sink) {
  chain.validate();
  table.validate();
  if (table.n_transmons() != chain.n_transmons)
    throw std::invalid_argument("propagate: pulse rows must match chain.n_transmons");
  if (n_sub < 1) throw std::invalid_argument("propagate: n_sub must be >= 1");

  const auto sectors = excitation_sectors(chain.n_transmons, chain.n_levels);
  const Eigen::MatrixXcd h_xy = coupling_hamiltonian(chain);

  // Detuning-independent coupling blocks, gathered once.
  std::vector<Eigen::MatrixXcd> xy_blocks;
  xy_blocks.reserve(sectors.size());
  for (const auto& sector : sectors) {
    const int d = static_cast<int>(sector.size());
    Eigen::MatrixXcd block(d, d);
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b) block(a, b) = h_xy(sector[a], sector[b]);
    xy_blocks.push_back(std::move(block));
  }

  const double two_pi = 2.0 * std::numbers::pi;
  const int n_segments = table.n_controls();
  const int substeps = table.meta.shape == PulseShape::PiecewiseConstant ? 1 : n_sub;
  const double sub_dt = table.meta.dt_ns / substeps;

  // Fourth-order commutator-free coefficients: Gauss-Legendre nodes c1, c2
  // inside each substep and palindromic mixing weights x1, x2.
  const double sqrt3 = std::sqrt(3.0);
  const double c1 = 0.5 - sqrt3 / 6.0, c2 = 0.5 + sqrt3 / 6.0;
  const double x1 = (3.0 - 2.0 * sqrt3) / 12.0, x2 = (3.0 + 2.0 * sqrt3) / 12.0;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es;
  auto apply_exp = [&](std::size_t s, const Eigen::VectorXd& diag, double xy_weight,
                       Eigen::MatrixXcd& onto) {
    const int d = static_cast<int>(sectors[s].size());
    Eigen::MatrixXcd block = xy_weight * xy_blocks[s];
    for (int a = 0; a < d; ++a) block(a, a) += diag(sectors[s][a]);
    es.compute(block);
    const Eigen::VectorXcd phases =
        (Complex(0.0, -two_pi * sub_dt) * es.eigenvalues().array()).exp().matrix();
    onto = es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint() * onto;
  };

  std::vector<Eigen::MatrixXcd> segment(sectors.size());
  DetuningSnapshot snap(static_cast<std::size_t>(chain.n_transmons));
  for (int seg = 0; seg < n_segments; ++seg) {
    for (std::size_t s = 0; s < sectors.size(); ++s)
      segment[s] = Eigen::MatrixXcd::Identity(xy_blocks[s].rows(), xy_blocks[s].rows());
    for (int sub = 0; sub < substeps; ++sub) {
      if (table.meta.shape == PulseShape::PiecewiseConstant) {
        // Constant Hamiltonian: one exact exponential per segment.
        for (int k = 0; k < chain.n_transmons; ++k) snap[k] = table.points_ghz(k, seg);
        const Eigen::VectorXd diag = diagonal_energies(chain, snap);
        for (std::size_t s = 0; s < sectors.size(); ++s) apply_exp(s, diag, 1.0, segment[s]);
      } else {
        const double t0 = seg * table.meta.dt_ns + sub * sub_dt;
        const Eigen::VectorXd diag_a = diagonal_energies(chain, table.sample(t0 + c1 * sub_dt));
        const Eigen::VectorXd diag_b = diagonal_energies(chain, table.sample(t0 + c2 * sub_dt));
        const Eigen::VectorXd early = x2 * diag_a + x1 * diag_b;
        const Eigen::VectorXd late = x1 * diag_a + x2 * diag_b;
        for (std::size_t s = 0; s < sectors.size(); ++s) {
          apply_exp(s, early, 0.5, segment[s]);
          apply_exp(s, late, 0.5, segment[s]);
        }
      }
    }
    sink(seg, sectors, segment);
  }
}

inline Eigen::MatrixXcd scatter_sectors(int dim, const std::vector<std::vector<int>>& sectors,
                                        const std::vector<Eigen::MatrixXcd>& blocks) {
  Eigen::MatrixXcd full = Eigen::MatrixXcd::Zero(dim, dim);
  for (std::size_t s = 0; s < sectors.size(); ++s) {
    const auto& sector = sectors[s];
    for (std::size_t a = 0; a < sector.size(); ++a)
      for (std::size_t b = 0; b < sector.size(); ++b)
        full(sector[a], sector[b]) = blocks[s](a, b);
  }
  return full;
}

}  // namespace detail

/// One 64x64 unitary per control segment, in time order. For the erf shape
/// each segment is the product of n_sub fourth-order substeps.
inline std::vector<Eigen::MatrixXcd> segment_unitaries(const TransmonChain& chain,
                                                       const ControlTable& table,
                                                       int n_sub = kDefaultSubsteps) {
  std::vector<Eigen::MatrixXcd> out;
  out.reserve(static_cast<std::size_t>(table.n_controls()));
  detail::scan_segment_unitaries(chain, table, n_sub,
                                 [&](int, const std::vector<std::vector<int>>& sectors,
                                     const std::vector<Eigen::MatrixXcd>& blocks) {
                                   out.push_back(detail::scatter_sectors(chain.dim(), sectors, blocks));
                                 });
  return out;
}

/// Time-ordered evolution over the whole pulse, U = U_N ... U_2 U_1, each
/// factor exp(-i 2*pi*H*dt) with H in GHz and dt in ns.
inline EvolutionResult propagate(const TransmonChain& chain, const ControlTable& table,
                                 int n_sub = kDefaultSubsteps) {
  std::vector<Eigen::MatrixXcd> product;
  detail::scan_segment_unitaries(
      chain, table, n_sub,
      [&](int seg, const std::vector<std::vector<int>>& sectors,
          const std::vector<Eigen::MatrixXcd>& blocks) {
        if (seg == 0) {
          product = blocks;
          return;
        }
        for (std::size_t s = 0; s < sectors.size(); ++s) product[s] = blocks[s] * product[s];
      });

  EvolutionResult result;
  const auto sectors = excitation_sectors(chain.n_transmons, chain.n_levels);
  result.u_full = detail::scatter_sectors(chain.dim(), sectors, product);

  const auto comp = comp_subspace_indices(chain.n_transmons, chain.n_levels);
  const int nc = static_cast<int>(comp.size());
  result.u_comp.resize(nc, nc);
  for (int a = 0; a < nc; ++a)
    for (int b = 0; b < nc; ++b) result.u_comp(a, b) = result.u_full(comp[a], comp[b]);
  return result;
}

}  // namespace cczpulse
