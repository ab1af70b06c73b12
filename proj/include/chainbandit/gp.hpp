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

#ifndef CHAINBANDIT_GP_HPP_
#define CHAINBANDIT_GP_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "chainbandit/kernel.hpp"
#include "chainbandit/metric.hpp"
#include "chainbandit/random.hpp"

namespace chainbandit {

// Lower Cholesky factor of `a`, adding diagonal jitter 1e-10, 1e-9, ..., 1e-6
// (scaled by the mean diagonal) until the factorization succeeds.
// Throws NumericError when even the largest jitter fails.
struct JitteredFactor {
  Eigen::MatrixXd lower;
  double jitter = 0.0;
};
JitteredFactor cholesky_with_jitter(const Eigen::MatrixXd& a);

Eigen::MatrixXd gram_matrix(const Kernel& kernel, const PointCloud& points);

// Posterior of f ~ GP(0, k) given noisy observations y_i = f(x_i) + N(0, eta2).
// A value type: update() leaves the original untouched.
class GPPosterior {
 public:
  static constexpr std::size_t kRebuildInterval = 64;

  struct Prediction {
    double mu = 0.0;
    double sigma = 0.0;
    double variance = 0.0;
  };

  GPPosterior(Kernel kernel, double eta2);
  GPPosterior(Kernel kernel, double eta2, const PointCloud& inputs, std::span<const double> outputs);

  Prediction predict(std::span<const double> x) const;
  GPPosterior update(std::span<const double> x, double y) const;
  void update_in_place(std::span<const double> x, double y);

  std::size_t size() const noexcept { return outputs_.size(); }
  const Kernel& kernel() const noexcept { return kernel_; }
  double eta2() const noexcept { return eta2_; }
  const PointCloud& inputs() const noexcept { return inputs_; }
  const std::vector<double>& outputs() const noexcept { return outputs_; }
  double jitter() const noexcept { return jitter_; }

 private:
  void rebuild();
  void refresh_weights();

  Kernel kernel_;
  double eta2_;
  PointCloud inputs_;
  std::vector<double> outputs_;
  Eigen::MatrixXd lower_;    // factor of K + (eta2 + jitter) I
  Eigen::VectorXd weights_;  // C^{-1} Y
  std::size_t factored_ = 0;
  std::size_t since_rebuild_ = 0;
  double jitter_ = 0.0;
};

// Posterior over a fixed finite index set, carried as a full mean vector and
// covariance matrix and updated by rank-one downdates. Equivalent to
// GPPosterior restricted to the points, at O(n^2) per observation.
class SpacePosterior {
 public:
  SpacePosterior(Eigen::MatrixXd prior_covariance, double eta2);

  void observe(PointId x, double y);
  double mean(PointId x) const { return mean_(static_cast<Eigen::Index>(x)); }
  double variance(PointId x) const;
  double sigma(PointId x) const;
  std::size_t size() const noexcept { return static_cast<std::size_t>(mean_.size()); }
  std::size_t observations() const noexcept { return observations_; }
  double eta2() const noexcept { return eta2_; }

 private:
  Eigen::MatrixXd cov_;
  Eigen::VectorXd mean_;
  double eta2_;
  std::size_t observations_ = 0;
};

// Draws of f ~ N(0, K) on a fixed point set; factorizes once.
class PriorSampler {
 public:
  explicit PriorSampler(const Eigen::MatrixXd& covariance);
  Eigen::VectorXd draw(Rng& rng) const;
  double jitter() const noexcept { return factor_.jitter; }
  std::size_t size() const noexcept { return static_cast<std::size_t>(factor_.lower.rows()); }

 private:
  JitteredFactor factor_;
};

std::vector<double> sample_prior(const Kernel& kernel, const PointCloud& points, std::uint64_t seed);

// I(X) = 1/2 log det(I + K_X / eta2).
double information_gain(const Kernel& kernel, const PointCloud& points, double eta2);
double information_gain(const Eigen::MatrixXd& gram, double eta2);
// I(X_1..X_t) for every prefix length t = 1..n, from one factorization.
std::vector<double> information_gain_prefixes(const Eigen::MatrixXd& gram, double eta2);

enum class GammaMode { kExact, kGreedy };
inline constexpr std::uint64_t kGammaExactLimit = 1'000'000;

// Maximum information gain over t distinct points of the space.
double gamma_t(const Eigen::MatrixXd& prior_covariance, std::size_t t, double eta2, GammaMode mode);
double gamma_t(const Kernel& kernel, const FiniteMetricSpace& space, std::size_t t, double eta2, GammaMode mode);

// 2 / log(1 + 1/eta2).
double c_eta(double eta2);

struct Interval {
  double lower = 0.0;
  double upper = 0.0;
};

// (l, u) with P[X^2 not in (l^2, u^2)] < e^{-s^2} for X ~ N(mu, sigma^2).
Interval squared_gaussian_interval(double mu, double sigma, double s);

// Interval for g^2 at level u, with the union bound over `channels` folded in.
Interval squared_gp_bounds(double mu, double sigma, double u, int channels);

}  // namespace chainbandit

#endif  // CHAINBANDIT_GP_HPP_
