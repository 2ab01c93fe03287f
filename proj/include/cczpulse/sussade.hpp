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
#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

#include "cczpulse/parallel.hpp"
#include "cczpulse/rng.hpp"

namespace cczpulse {

// SuSSADE: differential evolution with jDE-style self-adaptive parameters
// plus subspace-selective breeding. Each generation either breeds over the
// whole coordinate space or, with probability S, over a random
// m-dimensional coordinate subspace shared by the whole population. The
// one-dimensional restriction (subspace_dims = {1}) with S = 0.14 is the
// workhorse setting for pulse design. Maximization convention throughout.
//
// Determinism contract: one master RNG drives every random decision, in a
// fixed order (subspace draw, then per individual: mu adaptation, xi
// adaptation, three donor indices, forced crossover coordinate, crossover
// coin flips). Objective evaluations consume no randomness, so running them
// in parallel never changes the outcome.

enum class BoundPolicy {
  Reflect,   ///< fold the overshoot back inside
  Clip,      ///< saturate at the violated edge
  Resample,  ///< redraw the coordinate uniformly inside the box
};

/// One candidate solution with its own adaptive parameters.
struct Chromosome {
  Eigen::VectorXd x;
  double mu = 0.5;
  double xi = 0.9;
  double fitness = -std::numeric_limits<double>::infinity();
};

struct OptimizerConfig {
  int population = 32;
  double switch_s = 0.14;               ///< subspace-breeding probability S
  std::vector<int> subspace_dims = {1}; ///< allowed subspace dimensions m
  double kappa1 = 0.1;                  ///< P(redraw mu) per individual per generation
  double kappa2 = 0.1;                  ///< P(redraw xi)
  double mu_l = 0.1;                    ///< mu redraw: mu_l + r * mu_u
  double mu_u = 0.9;
  double init_mu = 0.5;
  double init_xi = 0.9;
  BoundPolicy bound_policy = BoundPolicy::Reflect;
  Eigen::VectorXd lo, hi;               ///< search box, one entry per coordinate
  std::uint64_t seed = 1;
  std::optional<double> target_fitness; ///< stop once best >= target
  long max_generations = 0;             ///< 0 = unbounded
  long max_evaluations = 0;             ///< 0 = unbounded
  unsigned threads = 0;                 ///< objective evaluation threads, 0 = hardware

  int dimension() const { return static_cast<int>(lo.size()); }

  static Eigen::VectorXd box(int dim, double value) {
    return Eigen::VectorXd::Constant(dim, value);
  }

  void validate() const {
    if (population < 4)
      throw std::invalid_argument("optimizer.population: must be >= 4 (mutation needs 4 distinct indices)");
    if (!(switch_s >= 0.0 && switch_s <= 1.0))
      throw std::invalid_argument("optimizer.switch_s: must be in [0, 1]");
    if (lo.size() == 0 || lo.size() != hi.size())
      throw std::invalid_argument("optimizer.bounds: lo/hi must be nonempty and of equal length");
    for (Eigen::Index j = 0; j < lo.size(); ++j)
      if (!(lo(j) < hi(j)) || !std::isfinite(lo(j)) || !std::isfinite(hi(j)))
        throw std::invalid_argument("optimizer.bounds: need finite lo < hi per coordinate");
    if (switch_s > 0.0) {
      if (subspace_dims.empty())
        throw std::invalid_argument("optimizer.subspace_dims: must be nonempty when switch_s > 0");
      for (int m : subspace_dims)
        if (m < 1 || m > dimension())
          throw std::invalid_argument("optimizer.subspace_dims: entries must be in [1, dimension]");
    }
    if (!(kappa1 >= 0.0 && kappa1 <= 1.0) || !(kappa2 >= 0.0 && kappa2 <= 1.0))
      throw std::invalid_argument("optimizer.kappa: probabilities must be in [0, 1]");
    if (!(mu_l >= 0.0) || !(mu_u >= 0.0))
      throw std::invalid_argument("optimizer.mu_l/mu_u: must be >= 0");
    if (!(init_xi >= 0.0 && init_xi <= 1.0))
      throw std::invalid_argument("optimizer.init_xi: must be in [0, 1]");
    if (!target_fitness && max_generations <= 0 && max_evaluations <= 0)
      throw std::invalid_argument("optimizer.stop: need a target fitness, generation cap, or evaluation cap");
  }
};

struct TracePoint {
  int generation = 0;
  long evaluations = 0;
  double best_fitness = 0.0;
  double mean_fitness = 0.0;
};

struct OptimizeResult {
  Chromosome best;
  std::vector<TracePoint> trace;
  long evaluations = 0;
  int generations = 0;
  bool target_reached = false;
};

/// The mutation formula: donor = c1 + mu * (c2 - c3), before bound handling.
inline Eigen::VectorXd donor_vector(const Eigen::VectorXd& c1, const Eigen::VectorXd& c2,
                                    const Eigen::VectorXd& c3, double mu) {
  return c1 + mu * (c2 - c3);
}

/// Brings one coordinate back inside [lo, hi] per the chosen policy.
inline double constrain_coordinate(double v, double lo, double hi, BoundPolicy policy,
                                   std::mt19937_64& gen) {
  if (v >= lo && v <= hi) return v;
  switch (policy) {
    case BoundPolicy::Clip:
      return std::clamp(v, lo, hi);
    case BoundPolicy::Resample:
      return rng::uniform(gen, lo, hi);
    case BoundPolicy::Reflect:
    default:
      while (v < lo || v > hi) {
        if (v > hi) v = 2.0 * hi - v;
        if (v < lo) v = 2.0 * lo - v;
      }
      return v;
  }
}

/// Draws the donor for individual i from three other distinct population
/// members and constrains it to the box.
inline Eigen::VectorXd mutate(const std::vector<Chromosome>& population, int i, double mu,
                              const OptimizerConfig& cfg, std::mt19937_64& gen) {
  const int p = static_cast<int>(population.size());
  if (p < 4) throw std::invalid_argument("mutate: population must hold at least 4 members");
  int i1, i2, i3;
  do { i1 = static_cast<int>(rng::below(gen, p)); } while (i1 == i);
  do { i2 = static_cast<int>(rng::below(gen, p)); } while (i2 == i || i2 == i1);
  do { i3 = static_cast<int>(rng::below(gen, p)); } while (i3 == i || i3 == i1 || i3 == i2);
  Eigen::VectorXd donor = donor_vector(population[i1].x, population[i2].x, population[i3].x, mu);
  for (Eigen::Index j = 0; j < donor.size(); ++j)
    donor(j) = constrain_coordinate(donor(j), cfg.lo(j), cfg.hi(j), cfg.bound_policy, gen);
  return donor;
}

/// Binomial crossover restricted to the active coordinate set. One
/// uniformly chosen active coordinate always comes from the donor, so the
/// trial never equals the parent by construction; inactive coordinates are
/// the parent's.
inline Eigen::VectorXd crossover(const Eigen::VectorXd& parent, const Eigen::VectorXd& donor,
                                 double xi, const std::vector<int>& active,
                                 std::mt19937_64& gen) {
  if (active.empty()) throw std::invalid_argument("crossover: active coordinate set is empty");
  Eigen::VectorXd trial = parent;
  const int j_rand = active[rng::below(gen, active.size())];
  for (int j : active) {
    if (j == j_rand) {
      trial(j) = donor(j);
    } else {
      trial(j) = rng::uniform01(gen) < xi ? donor(j) : parent(j);
    }
  }
  return trial;
}

/// Survival rule: the higher objective wins; ties keep the trial. The
/// survivor carries its own (mu, xi).
inline Chromosome select(const Chromosome& parent, Chromosome trial) {
  return trial.fitness >= parent.fitness ? std::move(trial) : parent;
}

/// jDE parameter update, applied before breeding each generation. Offspring
/// inherit the values that created them.
inline std::pair<double, double> self_adapt(double mu, double xi, const OptimizerConfig& cfg,
                                            std::mt19937_64& gen) {
  if (rng::uniform01(gen) < cfg.kappa1) mu = cfg.mu_l + rng::uniform01(gen) * cfg.mu_u;
  if (rng::uniform01(gen) < cfg.kappa2) xi = rng::uniform01(gen);
  return {mu, xi};
}

/// Per-generation breeding domain: with probability S a random
/// m-dimensional coordinate subspace (m drawn from cfg.subspace_dims),
/// otherwise every coordinate. Returned ascending. One draw per generation,
/// shared by the whole population.
inline std::vector<int> choose_subspace(int dimension, const OptimizerConfig& cfg,
                                        std::mt19937_64& gen) {
  std::vector<int> active;
  if (rng::uniform01(gen) < cfg.switch_s) {
    const int m = cfg.subspace_dims[rng::below(gen, cfg.subspace_dims.size())];
    active.reserve(static_cast<std::size_t>(m));
    while (static_cast<int>(active.size()) < m) {
      const int c = static_cast<int>(rng::below(gen, dimension));
      if (std::find(active.begin(), active.end(), c) == active.end()) active.push_back(c);
    }
    std::sort(active.begin(), active.end());
  } else {
    active.resize(static_cast<std::size_t>(dimension));
    for (int j = 0; j < dimension; ++j) active[j] = j;
  }
  return active;
}

/// Runs the optimizer until a stop condition fires. The objective must be a
/// pure function of the genome and callable concurrently. The optional
/// observer sees (generation, population) after every selection step.
template <typename Objective>
OptimizeResult optimize(Objective&& objective, const OptimizerConfig& cfg,
                        const std::function<void(int, const std::vector<Chromosome>&)>& observer = {}) {
  cfg.validate();
  const int dim = cfg.dimension();
  const int p = cfg.population;
  std::mt19937_64 gen(cfg.seed);

  std::vector<Chromosome> population(static_cast<std::size_t>(p));
  for (int i = 0; i < p; ++i) {
    population[i].x.resize(dim);
    for (int j = 0; j < dim; ++j)
      population[i].x(j) = rng::uniform(gen, cfg.lo(j), cfg.hi(j));
    population[i].mu = cfg.init_mu;
    population[i].xi = cfg.init_xi;
  }
  parallel_for(static_cast<std::size_t>(p), cfg.threads,
               [&](std::size_t i) { population[i].fitness = objective(population[i].x); });

  OptimizeResult result;
  result.evaluations = p;

  auto record = [&](int generation) {
    int best_i = 0;
    double mean = 0.0;
    for (int i = 0; i < p; ++i) {
      mean += population[i].fitness;
      if (population[i].fitness > population[best_i].fitness) best_i = i;
    }
    result.best = population[best_i];
    result.trace.push_back({generation, result.evaluations, population[best_i].fitness,
                            mean / static_cast<double>(p)});
  };
  record(0);
  if (observer) observer(0, population);

  auto target_hit = [&] {
    return cfg.target_fitness && result.best.fitness >= *cfg.target_fitness;
  };

  std::vector<Eigen::VectorXd> trial_x(static_cast<std::size_t>(p));
  std::vector<double> trial_mu(static_cast<std::size_t>(p)), trial_xi(static_cast<std::size_t>(p));
  std::vector<double> trial_fitness(static_cast<std::size_t>(p));

  while (!target_hit()) {
    if (cfg.max_generations > 0 && result.generations >= cfg.max_generations) break;
    if (cfg.max_evaluations > 0 && result.evaluations + p > cfg.max_evaluations) break;

    const std::vector<int> active = choose_subspace(dim, cfg, gen);
    for (int i = 0; i < p; ++i) {
      const auto [mu, xi] = self_adapt(population[i].mu, population[i].xi, cfg, gen);
      const Eigen::VectorXd donor = mutate(population, i, mu, cfg, gen);
      trial_x[i] = crossover(population[i].x, donor, xi, active, gen);
      trial_mu[i] = mu;
      trial_xi[i] = xi;
    }
    parallel_for(static_cast<std::size_t>(p), cfg.threads,
                 [&](std::size_t i) { trial_fitness[i] = objective(trial_x[i]); });
    result.evaluations += p;
    for (int i = 0; i < p; ++i) {
      Chromosome trial{std::move(trial_x[i]), trial_mu[i], trial_xi[i], trial_fitness[i]};
      population[i] = select(population[i], std::move(trial));
    }
    ++result.generations;
    record(result.generations);
    if (observer) observer(result.generations, population);
  }

  result.target_reached = target_hit();
  return result;
}

}  // namespace cczpulse
