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
#include <functional>
#include <numbers>
#include <string>
#include <vector>

namespace cczpulse {

// Classic test functions for optimizer validation. All are stated in
// maximization form (negated), optimum value 0.

struct BenchmarkObjective {
  std::string name;
  double lo = 0.0, hi = 0.0;  ///< conventional search box per coordinate
  std::function<double(const Eigen::VectorXd&)> value;
};

inline BenchmarkObjective sphere_benchmark() {
  return {"sphere", -5.12, 5.12, [](const Eigen::VectorXd& x) { return -x.squaredNorm(); }};
}

inline BenchmarkObjective rosenbrock_benchmark() {
  return {"rosenbrock", -2.048, 2.048, [](const Eigen::VectorXd& x) {
            double sum = 0.0;
            for (Eigen::Index i = 0; i + 1 < x.size(); ++i) {
              const double a = x(i + 1) - x(i) * x(i);
              const double b = 1.0 - x(i);
              sum += 100.0 * a * a + b * b;
            }
            return -sum;
          }};
}

inline BenchmarkObjective rastrigin_benchmark() {
  return {"rastrigin", -5.12, 5.12, [](const Eigen::VectorXd& x) {
            double sum = 10.0 * static_cast<double>(x.size());
            for (Eigen::Index i = 0; i < x.size(); ++i)
              sum += x(i) * x(i) - 10.0 * std::cos(2.0 * std::numbers::pi * x(i));
            return -sum;
          }};
}

inline std::vector<BenchmarkObjective> benchmark_suite() {
  return {sphere_benchmark(), rosenbrock_benchmark(), rastrigin_benchmark()};
}

}  // namespace cczpulse
