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

#include <doctest.h>

#include <cmath>
#include <numeric>

#include "chainbandit/errors.hpp"
#include "chainbandit/kernel.hpp"
#include "chainbandit/metric.hpp"
#include "test_support.hpp"

using namespace chainbandit;
using chainbandit::testing::line_space;
using chainbandit::testing::random_space;

namespace {

// Max ball size over the points, for the harmonic set-cover bound.
std::size_t max_ball(const FiniteMetricSpace& s, double eps) {
  std::size_t best = 0;
  for (PointId i = 0; i < s.size(); ++i) {
    std::size_t c = 0;
    for (PointId j = 0; j < s.size(); ++j) c += s(i, j) <= eps ? 1 : 0;
    best = std::max(best, c);
  }
  return best;
}

}  // namespace

TEST_CASE("distance on a line and identity") {
  const auto s = line_space(5);
  CHECK(s.distance(0, 4) == 4.0);
  for (PointId i = 0; i < 5; ++i) CHECK(s.distance(i, i) == 0.0);
  CHECK(s.diameter() == 4.0);
  CHECK_THROWS_AS(s.distance(0, 5), ArgumentError);
  CHECK_THROWS_AS(s.distance(9, 0), ArgumentError);
}

TEST_CASE("kernel canonical distance vanishes on identical inputs") {
  const Kernel k = parse_kernel("se:ls=1.0");
  const auto s = FiniteMetricSpace::from_points(PointCloud(1, {0.0, 0.0}), kernel_canonical_rule(k));
  CHECK(s.distance(0, 1) == 0.0);
  CHECK(s.distance(0, 0) == 0.0);
}

TEST_CASE("matrix construction rejects non-metrics") {
  SUBCASE("nonzero diagonal") {
    CHECK_THROWS_AS(FiniteMetricSpace::from_matrix(2, {1, 1, 1, 0}), ArgumentError);
  }
  SUBCASE("asymmetric") {
    CHECK_THROWS_AS(FiniteMetricSpace::from_matrix(2, {0, 1, 2, 0}), ArgumentError);
  }
  SUBCASE("negative") {
    CHECK_THROWS_AS(FiniteMetricSpace::from_matrix(2, {0, -1, -1, 0}), ArgumentError);
  }
  SUBCASE("triangle violated") {
    CHECK_THROWS_AS(FiniteMetricSpace::from_matrix(3, {0, 1, 5, 1, 0, 1, 5, 1, 0}), ArgumentError);
  }
  SUBCASE("pseudo-metric with zero off-diagonal is fine") {
    const auto s = FiniteMetricSpace::from_matrix(3, {0, 0, 1, 0, 0, 1, 1, 1, 0});
    CHECK(s.distance(0, 1) == 0.0);
    CHECK(s.diameter() == 1.0);
  }
}

TEST_CASE("diameter is the exhaustive maximum") {
  Rng rng = make_stream(11);
  for (int rep = 0; rep < 10; ++rep) {
    const auto s = random_space(rng, 30, 3);
    double best = 0.0;
    for (PointId i = 0; i < s.size(); ++i)
      for (PointId j = 0; j < s.size(); ++j) best = std::max(best, s(i, j));
    CHECK(s.diameter() == best);
  }
}

TEST_CASE("greedy cover on a line picks the highest-count ball with smallest-id ties") {
  const auto s = line_space(5);
  const auto c = greedy_cover(s, 1.0);
  // Points 1, 2, 3 each cover three points; 1 wins the tie, then 3 covers {3, 4}.
  CHECK(c.centers == std::vector<PointId>{1, 3});
  CHECK(is_valid_cover(s, c));
}

TEST_CASE("greedy cover degenerate inputs") {
  const auto s = line_space(10);
  CHECK(greedy_cover(s, s.diameter()).centers == std::vector<PointId>{0});
  CHECK(greedy_cover(s, 100.0).centers == std::vector<PointId>{0});
  const std::vector<PointId> only7{7};
  CHECK(greedy_cover(s, 0.5, only7).centers == std::vector<PointId>{7});
  CHECK_THROWS_AS(greedy_cover(s, 1.0, std::vector<PointId>{}), ArgumentError);
  CHECK_THROWS_AS(greedy_cover(s, 0.0), ArgumentError);
  CHECK_THROWS_AS(greedy_cover(s, 1.0, std::vector<PointId>{42}), ArgumentError);
}

TEST_CASE("greedy cover is valid on random spaces and subsets") {
  Rng rng = make_stream(3);
  for (int rep = 0; rep < 50; ++rep) {
    const auto s = random_space(rng, 40, 2);
    const double eps = 0.05 + 0.3 * (rep % 7) / 7.0;
    const auto c = greedy_cover(s, eps);
    CHECK(is_valid_cover(s, c));
    std::vector<PointId> subset;
    for (PointId i = 0; i < s.size(); i += 3) subset.push_back(i);
    const auto cs = greedy_cover(s, eps, subset);
    CHECK(is_valid_cover(s, cs, subset));
    for (PointId x : cs.centers) CHECK(x % 3 == 0);
  }
}

TEST_CASE("greedy cover is deterministic") {
  Rng a = make_stream(5), b = make_stream(5);
  const auto sa = random_space(a, 60, 2), sb = random_space(b, 60, 2);
  const auto ca = greedy_cover(sa, 0.2), cb = greedy_cover(sb, 0.2);
  CHECK(ca.centers == cb.centers);
  CHECK(ca.covered_by == cb.covered_by);
}

TEST_CASE("brute-force minimum cover") {
  const auto s = line_space(5);
  CHECK(brute_force_min_cover(s, 1.0).centers.size() == 2);
  CHECK(is_valid_cover(s, brute_force_min_cover(s, 1.0)));
  CHECK(brute_force_min_cover(s, 4.0).centers.size() == 1);
  CHECK(brute_force_min_cover(s, 0.5).centers.size() == 5);
  CHECK_THROWS_AS(brute_force_min_cover(line_space(21), 1.0), CapacityError);
  CHECK_THROWS_AS(brute_force_min_cover(s, 0.0), ArgumentError);
}

TEST_CASE("metric entropy") {
  const auto s = line_space(5);
  CHECK(metric_entropy(s, 1.0, EntropyMode::kExact) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  CHECK(metric_entropy(s, 1.0, EntropyMode::kGreedy) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  CHECK(metric_entropy(s, 4.0, EntropyMode::kExact) == 0.0);
  CHECK(metric_entropy(s, 4.0, EntropyMode::kGreedy) == 0.0);
}

TEST_CASE("exact metric entropy is non-increasing in epsilon; greedy dominates exact") {
  Rng rng = make_stream(17);
  for (int rep = 0; rep < 20; ++rep) {
    const auto s = random_space(rng, 12, 2);
    double prev = INFINITY;
    for (double eps = 0.05; eps < 1.6; eps += 0.05) {
      const double exact = metric_entropy(s, eps, EntropyMode::kExact);
      CHECK(exact <= prev);
      CHECK(metric_entropy(s, eps, EntropyMode::kGreedy) >= exact);
      prev = exact;
    }
  }
}

TEST_CASE("greedy stays within the harmonic set-cover factor on small spaces") {
  Rng rng = make_stream(23);
  for (int rep = 0; rep < 40; ++rep) {
    const std::size_t n = 4 + rep % 9;
    const auto s = random_space(rng, n, 2);
    for (double eps : {0.1, 0.25, 0.5}) {
      const double greedy = static_cast<double>(greedy_cover(s, eps).centers.size());
      const double opt = static_cast<double>(brute_force_min_cover(s, eps).centers.size());
      CHECK(greedy <= (1.0 + std::log(static_cast<double>(max_ball(s, eps)))) * opt + 1e-12);
    }
  }
}

TEST_CASE("sample cover draw count") {
  CHECK(sample_cover_draws(4, 1.0) == 10);
  CHECK(sample_cover_draws(1, 1.0) == 1);
  CHECK_THROWS_AS(sample_cover_draws(0, 1.0), ArgumentError);
  CHECK_THROWS_AS(sample_cover_draws(4, 0.0), ArgumentError);
}

TEST_CASE("sampled cover of the unit interval covers its cloud") {
  Rng rng = make_stream(99);
  const PointSampler unit = [](Rng& r) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    return std::vector<double>{u(r)};
  };
  const auto sc = sample_cover_compact(unit, 0.25, 16, 2.0, rng);
  CHECK(sc.cloud.size() == sample_cover_draws(16, 2.0));
  const auto space = FiniteMetricSpace::from_points(sc.cloud);
  CHECK(sc.cover.radius == doctest::Approx(0.125));
  CHECK(is_valid_cover(space, sc.cover));
  Rng again = make_stream(99);
  CHECK(sample_cover_compact(unit, 0.25, 16, 2.0, again).cover.centers == sc.cover.centers);
}

TEST_CASE("large spaces switch to on-the-fly distances and sampled triangle checks") {
  Rng rng = make_stream(4);
  const auto cloud = chainbandit::testing::uniform_cloud(rng, 200, 2);
  const auto s = FiniteMetricSpace::from_points(cloud);
  CHECK(s.dense());
  CHECK(s.has_points());
  CHECK(s.distance(3, 7) == doctest::Approx(std::hypot(cloud[3][0] - cloud[7][0], cloud[3][1] - cloud[7][1])));
}
