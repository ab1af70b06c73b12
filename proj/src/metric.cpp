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

#include "chainbandit/metric.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <sstream>

#include "chainbandit/errors.hpp"

namespace chainbandit {

PointCloud::PointCloud(std::size_t dim, std::vector<double> flat)
    : dim_(dim), data_(std::move(flat)) {
  if (dim_ == 0 && !data_.empty()) throw ArgumentError("point cloud: zero dimension");
  if (dim_ != 0 && data_.size() % dim_ != 0)
    throw ArgumentError("point cloud: coordinate count is not a multiple of the dimension");
}

PointCloud PointCloud::from_rows(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) return {};
  const std::size_t dim = rows.front().size();
  std::vector<double> flat;
  flat.reserve(rows.size() * dim);
  for (const auto& r : rows) {
    if (r.size() != dim) throw ArgumentError("point cloud: ragged rows");
    flat.insert(flat.end(), r.begin(), r.end());
  }
  return PointCloud(dim, std::move(flat));
}

void PointCloud::push_back(std::span<const double> point) {
  if (dim_ == 0) dim_ = point.size();
  if (point.size() != dim_ || dim_ == 0) throw ArgumentError("point cloud: dimension mismatch");
  data_.insert(data_.end(), point.begin(), point.end());
}

DistanceRule euclidean_rule() {
  return {"euclidean",
          [](std::span<const double> x, std::span<const double> y) {
            double s = 0.0;
            for (std::size_t k = 0; k < x.size(); ++k) {
              const double diff = x[k] - y[k];
              s += diff * diff;
            }
            return std::sqrt(s);
          },
          1e-12};
}

FiniteMetricSpace FiniteMetricSpace::from_matrix(std::size_t n, std::vector<double> matrix) {
  if (n == 0) throw ArgumentError("metric space: empty distance matrix");
  if (matrix.size() != n * n) throw ArgumentError("metric space: matrix is not n x n");
  FiniteMetricSpace space;
  space.n_ = n;
  space.dense_ = true;
  // Values read back from 12-digit text differ from the originals in the
  // last place, so the triangle check gets a little more room.
  space.rule_ = {"matrix", nullptr, 1e-9};
  for (std::size_t i = 0; i < n; ++i) {
    if (matrix[i * n + i] != 0.0) {
      std::ostringstream msg;
      msg << "metric space: d(" << i << "," << i << ") = " << matrix[i * n + i] << " is not 0";
      throw ArgumentError(msg.str());
    }
    for (std::size_t j = i + 1; j < n; ++j) {
      const double a = matrix[i * n + j];
      const double b = matrix[j * n + i];
      if (!std::isfinite(a) || !std::isfinite(b)) throw ArgumentError("metric space: non-finite distance");
      if (a < 0.0 || b < 0.0) throw ArgumentError("metric space: negative distance");
      if (std::abs(a - b) > 1e-12 * std::max(a, b)) {
        std::ostringstream msg;
        msg << "metric space: asymmetric distances at (" << i << "," << j << ")";
        throw ArgumentError(msg.str());
      }
      const double sym = 0.5 * (a + b);
      matrix[i * n + j] = sym;
      matrix[j * n + i] = sym;
    }
  }
  space.matrix_ = std::move(matrix);
  space.finish_construction();
  return space;
}

FiniteMetricSpace FiniteMetricSpace::from_points(PointCloud points, DistanceRule rule) {
  if (points.size() == 0) throw ArgumentError("metric space: empty point cloud");
  if (!rule.fn) throw ArgumentError("metric space: distance rule has no function");
  FiniteMetricSpace space;
  space.n_ = points.size();
  space.points_ = std::move(points);
  space.rule_ = std::move(rule);
  space.dense_ = space.n_ <= kDenseLimit;
  if (space.dense_) {
    const std::size_t n = space.n_;
    space.matrix_.assign(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const double d = space.rule_.fn(space.points_[i], space.points_[j]);
        if (!std::isfinite(d) || d < 0.0) throw ArgumentError("metric space: rule produced an invalid distance");
        space.matrix_[i * n + j] = d;
        space.matrix_[j * n + i] = d;
      }
    }
  }
  space.finish_construction();
  return space;
}

void FiniteMetricSpace::finish_construction() {
  const std::size_t n = n_;
  double diam = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) diam = std::max(diam, (*this)(i, j));
  diameter_ = diam;

  if (!dense_) {
    for (std::size_t i = 0; i < std::min<std::size_t>(n, 256); ++i) {
      if ((*this)(i, i) != 0.0) throw ArgumentError("metric space: rule gives d(x,x) != 0");
    }
  }

  const double slack = rule_.tolerance * std::max(diam, 1e-300);
  auto check = [&](std::size_t i, std::size_t j, std::size_t k) {
    if ((*this)(i, k) > (*this)(i, j) + (*this)(j, k) + slack) {
      std::ostringstream msg;
      msg << "metric space: triangle inequality fails on (" << i << "," << j << "," << k << ")";
      throw ArgumentError(msg.str());
    }
  };
  if (n <= kFullTriangleCheckLimit) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k) check(i, j, k);
  } else {
    Rng rng = make_stream(0x7a1a9c1eULL, n);
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    for (std::size_t t = 0; t < kSampledTriples; ++t) check(pick(rng), pick(rng), pick(rng));
  }
}

double FiniteMetricSpace::distance(PointId i, PointId j) const {
  if (i >= n_ || j >= n_) {
    std::ostringstream msg;
    msg << "distance: point id out of range (" << i << ", " << j << ") for a space of " << n_ << " points";
    throw ArgumentError(msg.str());
  }
  return (*this)(i, j);
}

namespace {

std::vector<PointId> normalized_subset(const FiniteMetricSpace& space, std::span<const PointId> subset) {
  std::vector<PointId> ids(subset.begin(), subset.end());
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  if (!ids.empty() && ids.back() >= space.size()) throw ArgumentError("greedy_cover: point id out of range");
  return ids;
}

}  // namespace

CoverResult greedy_cover(const FiniteMetricSpace& space, double epsilon, std::span<const PointId> subset) {
  if (!(epsilon > 0.0)) throw ArgumentError("greedy_cover: epsilon must be positive");
  const std::vector<PointId> ids = normalized_subset(space, subset);
  if (ids.empty()) throw ArgumentError("greedy_cover: empty subset");
  const std::size_t m = ids.size();

  CoverResult result;
  result.radius = epsilon;
  result.covered_by.assign(space.size(), kNoPoint);

  std::vector<char> alive(m, 1);
  std::vector<std::size_t> count(m, 0);
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = a; b < m; ++b)
      if (space(ids[a], ids[b]) <= epsilon) {
        ++count[a];
        if (b != a) ++count[b];
      }

  std::size_t remaining = m;
  std::vector<std::size_t> removed;
  while (remaining > 0) {
    std::size_t best = m;
    for (std::size_t a = 0; a < m; ++a)
      if (alive[a] && (best == m || count[a] > count[best])) best = a;
    const PointId center = ids[best];
    result.centers.push_back(center);

    removed.clear();
    for (std::size_t b = 0; b < m; ++b)
      if (alive[b] && space(center, ids[b]) <= epsilon) {
        alive[b] = 0;
        removed.push_back(b);
        result.covered_by[ids[b]] = center;
      }
    remaining -= removed.size();
    if (remaining == 0) break;
    for (std::size_t b : removed)
      for (std::size_t c = 0; c < m; ++c)
        if (alive[c] && space(ids[b], ids[c]) <= epsilon) --count[c];
  }
  return result;
}

CoverResult greedy_cover(const FiniteMetricSpace& space, double epsilon) {
  std::vector<PointId> all(space.size());
  std::iota(all.begin(), all.end(), PointId{0});
  return greedy_cover(space, epsilon, all);
}

CoverResult brute_force_min_cover(const FiniteMetricSpace& space, double epsilon) {
  if (!(epsilon > 0.0)) throw ArgumentError("brute_force_min_cover: epsilon must be positive");
  const std::size_t n = space.size();
  if (n > kBruteForceLimit) {
    throw CapacityError("brute_force_min_cover: " + std::to_string(n) + " points exceeds the limit of " +
                        std::to_string(kBruteForceLimit));
  }
  std::vector<std::uint32_t> ball(n, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (space(i, j) <= epsilon) ball[i] |= (1u << j);
  const std::uint32_t full = n == 32 ? ~0u : ((1u << n) - 1u);

  // Combinations of size k in lexicographic order; the first covering one wins.
  for (std::size_t k = 1; k <= n; ++k) {
    std::vector<std::size_t> pick(k);
    std::iota(pick.begin(), pick.end(), std::size_t{0});
    for (;;) {
      std::uint32_t covered = 0;
      for (std::size_t c : pick) covered |= ball[c];
      if (covered == full) {
        CoverResult result;
        result.radius = epsilon;
        result.centers.assign(pick.begin(), pick.end());
        result.covered_by.assign(n, kNoPoint);
        for (std::size_t p = 0; p < n; ++p) {
          PointId best = kNoPoint;
          for (PointId c : result.centers)
            if (space(p, c) <= epsilon && (best == kNoPoint || space(p, c) < space(p, best))) best = c;
          result.covered_by[p] = best;
        }
        return result;
      }
      std::size_t pos = k;
      while (pos > 0 && pick[pos - 1] == n - k + pos - 1) --pos;
      if (pos == 0) break;
      ++pick[pos - 1];
      for (std::size_t q = pos; q < k; ++q) pick[q] = pick[q - 1] + 1;
    }
  }
  throw InternalError("brute_force_min_cover: no cover found");
}

double metric_entropy(const FiniteMetricSpace& space, double epsilon, EntropyMode mode) {
  const CoverResult cover =
      mode == EntropyMode::kExact ? brute_force_min_cover(space, epsilon) : greedy_cover(space, epsilon);
  return std::log(static_cast<double>(cover.centers.size()));
}

bool is_valid_cover(const FiniteMetricSpace& space, const CoverResult& cover, std::span<const PointId> subset) {
  std::vector<PointId> ids(subset.begin(), subset.end());
  if (ids.empty()) {
    ids.resize(space.size());
    std::iota(ids.begin(), ids.end(), PointId{0});
  }
  if (cover.covered_by.size() != space.size()) return false;
  for (PointId p : ids) {
    if (p >= space.size()) return false;
    const PointId c = cover.covered_by[p];
    if (c == kNoPoint || c >= space.size()) return false;
    if (std::find(cover.centers.begin(), cover.centers.end(), c) == cover.centers.end()) return false;
    if (space(p, c) > cover.radius) return false;
  }
  return true;
}

std::size_t sample_cover_draws(std::size_t m_estimate, double u) {
  if (m_estimate < 1) throw ArgumentError("sample_cover: m_estimate must be at least 1");
  if (!(u > 0.0)) throw ArgumentError("sample_cover: u must be positive");
  const double m = static_cast<double>(m_estimate);
  return static_cast<std::size_t>(std::ceil(m * (std::log(m) + u) - 1e-12));
}

SampledCover sample_cover_compact(const PointSampler& sampler, double epsilon, std::size_t m_estimate, double u,
                                  Rng& rng, DistanceRule rule) {
  if (!(epsilon > 0.0)) throw ArgumentError("sample_cover: epsilon must be positive");
  const std::size_t draws = sample_cover_draws(m_estimate, u);
  SampledCover out;
  for (std::size_t i = 0; i < draws; ++i) out.cloud.push_back(sampler(rng));
  const FiniteMetricSpace cloud_space = FiniteMetricSpace::from_points(out.cloud, std::move(rule));
  out.cover = greedy_cover(cloud_space, 0.5 * epsilon);
  return out;
}

}  // namespace chainbandit
