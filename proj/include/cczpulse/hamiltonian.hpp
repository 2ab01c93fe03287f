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
#include <complex>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace cczpulse {

using Complex = std::complex<double>;

// Basis convention used everywhere in this library: the product state
// |j1 j2 j3 ...> of a chain with L levels per transmon is stored at index
//   j1 * L^(n-1) + j2 * L^(n-2) + ... + jn
// i.e. transmon 1 is the most significant digit. For the 3 x 4-level chain
// this is index = 16*j1 + 4*j2 + j3.

/// Static device model of a linear chain of frequency-tunable transmons.
/// All entries are ordinary frequencies in GHz (energies divided by h).
struct TransmonChain {
  int n_transmons = 3;
  int n_levels = 4;
  /// eta_ghz[k][j]: anharmonic shift of level j of transmon k. Level 0 is
  /// the reference and must be zero.
  std::vector<std::vector<double>> eta_ghz;
  /// g_ghz[k]: XY coupling between transmons k and k+1 (size n_transmons-1).
  std::vector<double> g_ghz;

  /// Hilbert-space dimension n_levels^n_transmons.
  int dim() const {
    int d = 1;
    for (int k = 0; k < n_transmons; ++k) d *= n_levels;
    return d;
  }

  void validate() const {
    if (n_transmons < 2) throw std::invalid_argument("chain.n_transmons: must be >= 2");
    if (n_levels < 2) throw std::invalid_argument("chain.n_levels: must be >= 2");
    if (static_cast<int>(eta_ghz.size()) != n_transmons)
      throw std::invalid_argument("chain.eta_ghz: need one row per transmon");
    for (int k = 0; k < n_transmons; ++k) {
      if (static_cast<int>(eta_ghz[k].size()) != n_levels)
        throw std::invalid_argument("chain.eta_ghz[" + std::to_string(k) + "]: need one entry per level");
      if (eta_ghz[k][0] != 0.0)
        throw std::invalid_argument("chain.eta_ghz[" + std::to_string(k) + "][0]: ground level must be 0");
      for (double e : eta_ghz[k])
        if (!std::isfinite(e)) throw std::invalid_argument("chain.eta_ghz: entries must be finite");
    }
    if (static_cast<int>(g_ghz.size()) != n_transmons - 1)
      throw std::invalid_argument("chain.coupling_ghz: need n_transmons-1 entries");
    for (double g : g_ghz)
      if (!(g >= 0.0) || !std::isfinite(g))
        throw std::invalid_argument("chain.coupling_ghz: entries must be finite and >= 0");
  }

  /// Identical transmons with Duffing-oscillator anharmonicity
  /// eta[j] = eta * j*(j-1)/2.
  static TransmonChain duffing(int n_transmons, int n_levels, double eta_ghz_scale,
                               std::vector<double> g_ghz) {
    TransmonChain chain;
    chain.n_transmons = n_transmons;
    chain.n_levels = n_levels;
    chain.eta_ghz.assign(n_transmons, std::vector<double>(n_levels, 0.0));
    for (int k = 0; k < n_transmons; ++k)
      for (int j = 0; j < n_levels; ++j)
        chain.eta_ghz[k][j] = eta_ghz_scale * j * (j - 1) / 2.0;
    chain.g_ghz = std::move(g_ghz);
    chain.validate();
    return chain;
  }
};

/// Per-transmon detunings (GHz) at one instant.
using DetuningSnapshot = std::vector<double>;

/// Level occupation digits (j1, ..., jn) of a product-basis index.
inline std::vector<int> level_digits(int index, int n_transmons, int n_levels) {
  std::vector<int> digits(n_transmons);
  for (int k = n_transmons - 1; k >= 0; --k) {
    digits[k] = index % n_levels;
    index /= n_levels;
  }
  return digits;
}

/// Ladder-type generalization of Pauli X on d levels:
/// X[j-1][j] = X[j][j-1] = sqrt(j).
inline Eigen::MatrixXcd coupling_x(int d) {
  if (d < 2) throw std::invalid_argument("coupling_x: dimension must be >= 2");
  Eigen::MatrixXcd x = Eigen::MatrixXcd::Zero(d, d);
  for (int j = 1; j < d; ++j) {
    x(j - 1, j) = std::sqrt(static_cast<double>(j));
    x(j, j - 1) = std::sqrt(static_cast<double>(j));
  }
  return x;
}

/// Ladder-type generalization of Pauli Y on d levels:
/// Y[j-1][j] = -i sqrt(j), Y[j][j-1] = +i sqrt(j).
inline Eigen::MatrixXcd coupling_y(int d) {
  if (d < 2) throw std::invalid_argument("coupling_y: dimension must be >= 2");
  Eigen::MatrixXcd y = Eigen::MatrixXcd::Zero(d, d);
  for (int j = 1; j < d; ++j) {
    y(j - 1, j) = Complex(0.0, -std::sqrt(static_cast<double>(j)));
    y(j, j - 1) = Complex(0.0, +std::sqrt(static_cast<double>(j)));
  }
  return y;
}

inline Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

/// Embeds a single-transmon operator at the given site of the chain,
/// identity elsewhere.
inline Eigen::MatrixXcd embed_single_site(const Eigen::MatrixXcd& op, int site, int n_transmons,
                                          int n_levels) {
  if (site < 0 || site >= n_transmons)
    throw std::invalid_argument("embed_single_site: transmon index out of range");
  if (op.rows() != n_levels || op.cols() != n_levels)
    throw std::invalid_argument("embed_single_site: operator dimension mismatch");
  int left = 1, right = 1;
  for (int k = 0; k < site; ++k) left *= n_levels;
  for (int k = site + 1; k < n_transmons; ++k) right *= n_levels;
  return kron(Eigen::MatrixXcd::Identity(left, left),
              kron(op, Eigen::MatrixXcd::Identity(right, right)));
}

/// The detuning-independent XY part sum_k (g_k/2)(X_k X_{k+1} + Y_k Y_{k+1}).
inline Eigen::MatrixXcd coupling_hamiltonian(const TransmonChain& chain) {
  chain.validate();
  const int d = chain.dim();
  const Eigen::MatrixXcd x = coupling_x(chain.n_levels);
  const Eigen::MatrixXcd y = coupling_y(chain.n_levels);
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(d, d);
  for (int k = 0; k + 1 < chain.n_transmons; ++k) {
    const Eigen::MatrixXcd xk = embed_single_site(x, k, chain.n_transmons, chain.n_levels);
    const Eigen::MatrixXcd xk1 = embed_single_site(x, k + 1, chain.n_transmons, chain.n_levels);
    const Eigen::MatrixXcd yk = embed_single_site(y, k, chain.n_transmons, chain.n_levels);
    const Eigen::MatrixXcd yk1 = embed_single_site(y, k + 1, chain.n_transmons, chain.n_levels);
    h += (chain.g_ghz[k] / 2.0) * (xk * xk1 + yk * yk1);
  }
  return h;
}

/// Diagonal energies sum_k (j_k * delta_k - eta[k][j_k]) per basis index.
inline Eigen::VectorXd diagonal_energies(const TransmonChain& chain,
                                         std::span<const double> delta_ghz) {
  if (static_cast<int>(delta_ghz.size()) != chain.n_transmons)
    throw std::invalid_argument("diagonal_energies: detuning count must match n_transmons");
  for (double v : delta_ghz)
    if (!std::isfinite(v)) throw std::invalid_argument("diagonal_energies: detunings must be finite");
  const int d = chain.dim();
  Eigen::VectorXd diag(d);
  for (int idx = 0; idx < d; ++idx) {
    int rest = idx;
    double e = 0.0;
    for (int k = chain.n_transmons - 1; k >= 0; --k) {
      const int j = rest % chain.n_levels;
      rest /= chain.n_levels;
      e += j * delta_ghz[k] - chain.eta_ghz[k][j];
    }
    diag(idx) = e;
  }
  return diag;
}

inline Eigen::VectorXd diagonal_energies(const TransmonChain& chain,
                                         const DetuningSnapshot& delta_ghz) {
  return diagonal_energies(chain, std::span<const double>(delta_ghz));
}

/// Full chain Hamiltonian H(t)/h in GHz for one detuning snapshot.
/// Hermitian by construction; commutes with the total excitation number.
inline Eigen::MatrixXcd build_hamiltonian(const TransmonChain& chain,
                                          std::span<const double> delta_ghz) {
  chain.validate();
  Eigen::MatrixXcd h = coupling_hamiltonian(chain);
  h.diagonal() += diagonal_energies(chain, delta_ghz).cast<Complex>();
  return h;
}

inline Eigen::MatrixXcd build_hamiltonian(const TransmonChain& chain,
                                          const DetuningSnapshot& delta_ghz) {
  return build_hamiltonian(chain, std::span<const double>(delta_ghz));
}

}  // namespace cczpulse
