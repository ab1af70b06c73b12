// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CHAINBANDIT_TESTS_TEST_SUPPORT_HPP_
#define CHAINBANDIT_TESTS_TEST_SUPPORT_HPP_

#include <cmath>
#include <random>
#include <vector>

#include "chainbandit/harness.hpp"
#include "chainbandit/kernel.hpp"
#include "chainbandit/metric.hpp"
#include "chainbandit/random.hpp"

namespace chainbandit::testing {

inline FiniteMetricSpace line_space(std::size_t n) { return FiniteMetricSpace::from_points(generate_points("line(" + std::to_string(n) + ")")); }

// Center (id 0) plus n leaves at mutual distance 1.
inline FiniteMetricSpace star_space(std::size_t n) { return FiniteMetricSpace::from_points(generate_points("star(" + std::to_string(n) + ")")); }

inline PointCloud uniform_cloud(Rng& rng, std::size_t n, std::size_t dim) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<double> flat(n * dim);
  for (auto& v : flat) v = unif(rng);
  return PointCloud(dim, flat);
}

inline FiniteMetricSpace random_space(Rng& rng, std::size_t n, std::size_t dim) {
  return FiniteMetricSpace::from_points(uniform_cloud(rng, n, dim));
}

inline double normal_sf(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

}  // namespace chainbandit::testing

#endif  // CHAINBANDIT_TESTS_TEST_SUPPORT_HPP_
