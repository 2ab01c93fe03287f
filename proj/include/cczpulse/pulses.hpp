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
#include <string>

#include "cczpulse/hamiltonian.hpp"

namespace cczpulse {

enum class PulseShape {
  PiecewiseConstant,
  ErfSmoothed,
};

/// Everything about a pulse except the control points themselves.
struct PulseMeta {
  double dt_ns = 1.0;                          ///< control-point spacing
  PulseShape shape = PulseShape::PiecewiseConstant;
  double sigma_ns = 0.25;                      ///< erf transition width
  double lo_ghz = -2.5;                        ///< detuning box, lower edge
  double hi_ghz = 2.5;                         ///< detuning box, upper edge

  void validate() const {
    if (!(dt_ns > 0.0)) throw std::invalid_argument("pulse.dt_ns: must be > 0");
    if (shape == PulseShape::ErfSmoothed && !(sigma_ns > 0.0))
      throw std::invalid_argument("pulse.sigma_ns: must be > 0 for the erf shape");
    if (!(lo_ghz < hi_ghz)) throw std::invalid_argument("pulse.bounds_ghz: need lo < hi");
    if (!std::isfinite(lo_ghz) || !std::isfinite(hi_ghz))
      throw std::invalid_argument("pulse.bounds_ghz: must be finite");
  }
};

/// A grid of detuning control points, one row per transmon, one column per
/// control interval, together with the rule that turns the grid into a
/// time function. Immutable in spirit: construct, then only sample.
struct ControlTable {
  Eigen::MatrixXd points_ghz;  ///< n_transmons x n_controls
  PulseMeta meta;

  int n_transmons() const { return static_cast<int>(points_ghz.rows()); }
  int n_controls() const { return static_cast<int>(points_ghz.cols()); }
  double duration_ns() const { return n_controls() * meta.dt_ns; }

  void validate() const {
    meta.validate();
    if (points_ghz.rows() < 1 || points_ghz.cols() < 1)
      throw std::invalid_argument("pulse.points_ghz: need at least one transmon and one control point");
    for (Eigen::Index k = 0; k < points_ghz.rows(); ++k)
      for (Eigen::Index l = 0; l < points_ghz.cols(); ++l) {
        const double v = points_ghz(k, l);
        if (!std::isfinite(v) || v < meta.lo_ghz || v > meta.hi_ghz)
          throw std::invalid_argument("pulse.points_ghz[" + std::to_string(k) + "][" +
                                      std::to_string(l) + "]: outside bounds_ghz");
      }
  }

  /// Detunings at time t in [0, duration]. Piecewise-constant segments are
  /// right-open, the last one closed. The erf shape anchors each transition
  /// at a segment boundary l*dt and mixes neighboring points with weight
  /// (1 + erf((t - l*dt)/(sqrt(2)*sigma)))/2, which stays inside
  /// [min(points), max(points)] and reduces to the step profile as
  /// sigma -> 0.
  DetuningSnapshot sample(double t_ns) const {
    const int n = n_controls();
    if (t_ns < 0.0 || t_ns > duration_ns())
      throw std::out_of_range("sample: t outside [0, duration]");
    DetuningSnapshot out(static_cast<std::size_t>(n_transmons()));
    if (meta.shape == PulseShape::PiecewiseConstant) {
      int seg = static_cast<int>(t_ns / meta.dt_ns);
      if (seg >= n) seg = n - 1;  // t == duration
      for (int k = 0; k < n_transmons(); ++k) out[k] = points_ghz(k, seg);
      return out;
    }
    const double denom = std::sqrt(2.0) * meta.sigma_ns;
    for (int k = 0; k < n_transmons(); ++k) {
      double v = points_ghz(k, 0);
      for (int l = 1; l < n; ++l) {
        const double step = points_ghz(k, l) - points_ghz(k, l - 1);
        v += step * 0.5 * (1.0 + std::erf((t_ns - l * meta.dt_ns) / denom));
      }
      out[k] = v;
    }
    return out;
  }

  /// Flattens transmon-major: row k occupies genome entries [k*N, (k+1)*N).
  Eigen::VectorXd to_genome() const {
    const int n = n_controls();
    Eigen::VectorXd x(static_cast<Eigen::Index>(n_transmons()) * n);
    for (int k = 0; k < n_transmons(); ++k)
      for (int l = 0; l < n; ++l) x(k * n + l) = points_ghz(k, l);
    return x;
  }

  static ControlTable from_genome(const Eigen::VectorXd& x, int n_transmons,
                                  const PulseMeta& meta) {
    meta.validate();
    if (n_transmons < 1) throw std::invalid_argument("from_genome: n_transmons must be >= 1");
    if (x.size() == 0 || x.size() % n_transmons != 0)
      throw std::invalid_argument("from_genome: genome length must be a nonzero multiple of n_transmons");
    const int n = static_cast<int>(x.size()) / n_transmons;
    ControlTable table;
    table.meta = meta;
    table.points_ghz.resize(n_transmons, n);
    for (int k = 0; k < n_transmons; ++k)
      for (int l = 0; l < n; ++l) table.points_ghz(k, l) = x(k * n + l);
    table.validate();  // rejects out-of-bounds entries
    return table;
  }
};

}  // namespace cczpulse
