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
#include <catch2/catch_amalgamated.hpp>

#include "cczpulse/hamiltonian.hpp"
#include "test_support.hpp"

using namespace cczpulse;

namespace {

// Independent dense construction: writes the XY hopping matrix elements
// directly in the product basis, g * sqrt(j_k) * sqrt(j_{k+1} + 1) between
// |.., j_k, j_{k+1}, ..> and |.., j_k - 1, j_{k+1} + 1, ..>, without going
// through the coupling operators or any tensor products.
Eigen::MatrixXcd oracle_hamiltonian(const TransmonChain& chain,
                                    const std::vector<double>& delta) {
  const int dim = chain.dim();
  const int levels = chain.n_levels;
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);
  for (int idx = 0; idx < dim; ++idx) {
    const std::vector<int> j = level_digits(idx, chain.n_transmons, levels);
    double e = 0.0;
    for (int k = 0; k < chain.n_transmons; ++k) e += j[k] * delta[k] - chain.eta_ghz[k][j[k]];
    h(idx, idx) = e;
    for (int k = 0; k + 1 < chain.n_transmons; ++k) {
      if (j[k] >= 1 && j[k + 1] <= levels - 2) {
        std::vector<int> moved = j;
        --moved[k];
        ++moved[k + 1];
        int jdx = 0;
        for (int m = 0; m < chain.n_transmons; ++m) jdx = jdx * levels + moved[m];
        const double amp =
            chain.g_ghz[k] * std::sqrt(static_cast<double>(j[k])) *
            std::sqrt(static_cast<double>(j[k + 1] + 1));
        h(jdx, idx) += amp;
        h(idx, jdx) += amp;
      }
    }
  }
  return h;
}

}  // namespace

TEST_CASE("coupling_x matches the ladder matrix elements") {
  const Eigen::MatrixXcd x = coupling_x(4);
  CHECK(std::abs(x(0, 1) - 1.0) < 1e-15);
  CHECK(std::abs(x(1, 2) - std::sqrt(2.0)) < 1e-15);
  CHECK(std::abs(x(2, 3) - std::sqrt(3.0)) < 1e-15);
  double off_sum = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      if (std::abs(i - j) != 1) off_sum += std::abs(x(i, j));
  CHECK(off_sum == 0.0);
  CHECK((x - x.adjoint()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("coupling operators reduce to the Pauli matrices on two levels") {
  const Eigen::MatrixXcd x = coupling_x(2);
  CHECK(std::abs(x(0, 1) - 1.0) < 1e-15);
  CHECK(std::abs(x(1, 0) - 1.0) < 1e-15);
  CHECK(std::abs(x(0, 0)) + std::abs(x(1, 1)) == 0.0);

  const Eigen::MatrixXcd y = coupling_y(2);
  CHECK(std::abs(y(0, 1) - Complex(0, -1)) < 1e-15);
  CHECK(std::abs(y(1, 0) - Complex(0, 1)) < 1e-15);
  CHECK(std::abs(y(0, 0)) + std::abs(y(1, 1)) == 0.0);
}

TEST_CASE("coupling_y top transition entry is -i") {
  const Eigen::MatrixXcd y = coupling_y(4);
  CHECK(std::abs(y(0, 1) - Complex(0, -1)) < 1e-15);
  CHECK((y - y.adjoint()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("two-level blocks of X and Y obey the Pauli commutator") {
  const Eigen::Matrix2cd x = coupling_x(4).topLeftCorner<2, 2>();
  const Eigen::Matrix2cd y = coupling_y(4).topLeftCorner<2, 2>();
  Eigen::Matrix2cd commutator = x * y - y * x;
  Eigen::Matrix2cd pauli_z;
  pauli_z << 1, 0, 0, -1;
  CHECK((commutator - Complex(0, 2) * pauli_z).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("coupling operators reject dimensions below two") {
  CHECK_THROWS_AS(coupling_x(1), std::invalid_argument);
  CHECK_THROWS_AS(coupling_y(0), std::invalid_argument);
}

TEST_CASE("build_hamiltonian vanishes for a fully idle chain") {
  TransmonChain chain = TransmonChain::duffing(3, 4, 0.0, {0.0, 0.0});
  const Eigen::MatrixXcd h = build_hamiltonian(chain, {0.0, 0.0, 0.0});
  CHECK(h.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("build_hamiltonian is diagonal without coupling or detuning") {
  const TransmonChain chain = test::reference_chain(0.0);
  const Eigen::MatrixXcd h = build_hamiltonian(chain, {0.0, 0.0, 0.0});
  for (int j1 = 0; j1 < 4; ++j1)
    for (int j2 = 0; j2 < 4; ++j2)
      for (int j3 = 0; j3 < 4; ++j3) {
        const int idx = 16 * j1 + 4 * j2 + j3;
        const double expected =
            -(chain.eta_ghz[0][j1] + chain.eta_ghz[1][j2] + chain.eta_ghz[2][j3]);
        CHECK(std::abs(h(idx, idx) - expected) < 1e-15);
      }
  Eigen::MatrixXcd off = h;
  off.diagonal().setZero();
  CHECK(off.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("build_hamiltonian agrees with an independent dense construction") {
  const TransmonChain chain = test::reference_chain();
  const std::vector<double> delta = {0.1, 0.0, 0.0};
  const Eigen::MatrixXcd h = build_hamiltonian(chain, delta);
  const Eigen::MatrixXcd oracle = oracle_hamiltonian(chain, delta);
  CHECK((h - oracle).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("build_hamiltonian agrees with the oracle on random inputs") {
  std::mt19937_64 gen(11);
  for (int trial = 0; trial < 20; ++trial) {
    TransmonChain chain = test::reference_chain();
    for (auto& row : chain.eta_ghz)
      for (std::size_t j = 1; j < row.size(); ++j) row[j] = rng::uniform(gen, -0.5, 0.5);
    chain.g_ghz = {rng::uniform(gen, 0.0, 0.1), rng::uniform(gen, 0.0, 0.1)};
    const std::vector<double> delta = {rng::uniform(gen, -2.5, 2.5), rng::uniform(gen, -2.5, 2.5),
                                       rng::uniform(gen, -2.5, 2.5)};
    const Eigen::MatrixXcd h = build_hamiltonian(chain, delta);
    CHECK((h - h.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((h - oracle_hamiltonian(chain, delta)).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("build_hamiltonian rejects mismatched detuning counts") {
  const TransmonChain chain = test::reference_chain();
  CHECK_THROWS_AS(build_hamiltonian(chain, {0.0, 0.0}), std::invalid_argument);
}

TEST_CASE("pure XY coupling conserves the total excitation number") {
  TransmonChain chain = TransmonChain::duffing(3, 4, 0.0, {0.05, 0.02});
  std::mt19937_64 gen(5);
  const std::vector<double> delta = {rng::uniform(gen, -1.0, 1.0), rng::uniform(gen, -1.0, 1.0),
                                     rng::uniform(gen, -1.0, 1.0)};
  const Eigen::MatrixXcd h = build_hamiltonian(chain, delta);
  Eigen::MatrixXcd number_op = Eigen::MatrixXcd::Zero(64, 64);
  Eigen::MatrixXcd level_number = Eigen::MatrixXcd::Zero(4, 4);
  for (int j = 0; j < 4; ++j) level_number(j, j) = j;
  for (int k = 0; k < 3; ++k) number_op += embed_single_site(level_number, k, 3, 4);
  CHECK((h * number_op - number_op * h).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("detuning enters the diagonal linearly") {
  const TransmonChain chain = test::reference_chain();
  const std::vector<double> delta = {0.3, -0.7, 1.1};
  const double alpha = 2.5;
  std::vector<double> scaled = delta;
  for (double& d : scaled) d *= alpha;
  const Eigen::VectorXd base = diagonal_energies(chain, {0.0, 0.0, 0.0});
  const Eigen::VectorXd once = diagonal_energies(chain, delta);
  const Eigen::VectorXd twice = diagonal_energies(chain, scaled);
  CHECK(((twice - base) - alpha * (once - base)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("chain validation names the violated invariant") {
  TransmonChain chain = test::reference_chain();
  chain.eta_ghz[1][0] = 0.1;
  CHECK_THROWS_WITH(chain.validate(), Catch::Matchers::ContainsSubstring("ground level"));
  chain = test::reference_chain();
  chain.g_ghz[0] = -0.01;
  CHECK_THROWS_WITH(chain.validate(), Catch::Matchers::ContainsSubstring("coupling_ghz"));
}
