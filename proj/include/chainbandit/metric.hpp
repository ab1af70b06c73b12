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

#ifndef CHAINBANDIT_METRIC_HPP_
#define CHAINBANDIT_METRIC_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "chainbandit/random.hpp"

namespace chainbandit {

using PointId = std::size_t;
inline constexpr PointId kNoPoint = std::numeric_limits<PointId>::max();

// Row-major coordinates of n points in R^dim.
class PointCloud {
 public:
  PointCloud() = default;
  PointCloud(std::size_t dim, std::vector<double> flat);
  static PointCloud from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t size() const noexcept { return dim_ == 0 ? 0 : data_.size() / dim_; }
  std::size_t dim() const noexcept { return dim_; }
  std::span<const double> operator[](std::size_t i) const noexcept {
    return {data_.data() + i * dim_, dim_};
  }
  void push_back(std::span<const double> point);
  const std::vector<double>& data() const noexcept { return data_; }

 private:
  std::size_t dim_ = 0;
  std::vector<double> data_;
};

using DistanceFn = std::function<double(std::span<const double>, std::span<const double>)>;

// How distances are derived from coordinates. `tolerance` is the slack,
// relative to the diameter, allowed when checking the triangle inequality;
// kernel-induced rules lose about half the mantissa to cancellation.
struct DistanceRule {
  std::string name;
  DistanceFn fn;
  double tolerance = 1e-12;
};

DistanceRule euclidean_rule();

// A finite pseudo-metric space on point ids 0..n-1. Distances live in a dense
// matrix up to kDenseLimit points and are evaluated from coordinates beyond.
// Construction checks the pseudo-metric axioms and throws ArgumentError.
class FiniteMetricSpace {
 public:
  static constexpr std::size_t kDenseLimit = 8192;
  static constexpr std::size_t kFullTriangleCheckLimit = 64;
  static constexpr std::size_t kSampledTriples = 10000;

  FiniteMetricSpace() = default;

  // `matrix` is n*n row-major.
  static FiniteMetricSpace from_matrix(std::size_t n, std::vector<double> matrix);
  static FiniteMetricSpace from_points(PointCloud points, DistanceRule rule = euclidean_rule());

  std::size_t size() const noexcept { return n_; }
  double diameter() const noexcept { return diameter_; }

  // Checked access; throws ArgumentError on an out-of-range id.
  double distance(PointId i, PointId j) const;

  double operator()(PointId i, PointId j) const noexcept {
    return dense_ ? matrix_[i * n_ + j] : rule_.fn(points_[i], points_[j]);
  }

  bool has_points() const noexcept { return points_.size() == n_ && n_ > 0; }
  const PointCloud& points() const noexcept { return points_; }
  const std::string& rule_name() const noexcept { return rule_.name; }
  bool dense() const noexcept { return dense_; }

 private:
  void finish_construction();

  std::size_t n_ = 0;
  bool dense_ = true;
  std::vector<double> matrix_;
  PointCloud points_;
  DistanceRule rule_;
  double diameter_ = 0.0;
};

// Closed-ball cover: every listed point lies within `radius` of its center.
struct CoverResult {
  std::vector<PointId> centers;     // in selection order
  double radius = 0.0;
  std::vector<PointId> covered_by;  // per point of the space; kNoPoint if not in the covered subset
};

// Greedy dominating-set heuristic: repeatedly take the remaining point whose
// closed eps-ball holds the most remaining points (smallest id on ties).
CoverResult greedy_cover(const FiniteMetricSpace& space, double epsilon,
                         std::span<const PointId> subset);
CoverResult greedy_cover(const FiniteMetricSpace& space, double epsilon);

// Exhaustive minimum eps-cover; spaces of at most kBruteForceLimit points.
inline constexpr std::size_t kBruteForceLimit = 20;
CoverResult brute_force_min_cover(const FiniteMetricSpace& space, double epsilon);

enum class EntropyMode { kExact, kGreedy };
double metric_entropy(const FiniteMetricSpace& space, double epsilon, EntropyMode mode);

// True iff every point of `subset` (all points when empty) is within
// cover.radius of cover.covered_by[point], and that center is listed.
bool is_valid_cover(const FiniteMetricSpace& space, const CoverResult& cover,
                    std::span<const PointId> subset = {});

// Number of uniform draws that make a cloud an eps/2-net with probability
// at least 1 - e^{-u}, given m_estimate >= N(X, d, eps/4).
std::size_t sample_cover_draws(std::size_t m_estimate, double u);

struct SampledCover {
  PointCloud cloud;
  CoverResult cover;  // radius epsilon / 2 over the cloud
};

using PointSampler = std::function<std::vector<double>(Rng&)>;

SampledCover sample_cover_compact(const PointSampler& sampler, double epsilon,
                                  std::size_t m_estimate, double u, Rng& rng,
                                  DistanceRule rule = euclidean_rule());

}  // namespace chainbandit

#endif  // CHAINBANDIT_METRIC_HPP_
