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

#include "chainbandit/gp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "chainbandit/errors.hpp"

namespace chainbandit {

JitteredFactor cholesky_with_jitter(const Eigen::MatrixXd& a) {
  const Eigen::Index n = a.rows();
  if (a.cols() != n) throw ArgumentError("cholesky: matrix is not square");
  if (n == 0) return {Eigen::MatrixXd(0, 0), 0.0};
  const double scale = std::max(1e-300, a.diagonal().cwiseAbs().mean());
  double jitter = 0.0;
  for (;;) {
    Eigen::MatrixXd shifted = a;
    shifted.diagonal().array() += jitter * scale;
    Eigen::LLT<Eigen::MatrixXd> llt(shifted);
    if (llt.info() == Eigen::Success && llt.matrixL().toDenseMatrix().diagonal().minCoeff() > 0.0) {
      return {llt.matrixL(), jitter * scale};
    }
    jitter = jitter == 0.0 ? 1e-10 : jitter * 10.0;
    if (jitter > 1e-6 * 1.0000001) {
      std::ostringstream msg;
      msg << "cholesky: factorization of a " << n << "x" << n << " matrix failed with jitter up to 1e-6";
      throw NumericError(msg.str());
    }
  }
}

Eigen::MatrixXd gram_matrix(const Kernel& kernel, const PointCloud& points) {
  const std::size_t n = points.size();
  Eigen::MatrixXd k(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j) {
      const double v = kernel(points[i], points[j]);
      k(i, j) = v;
      k(j, i) = v;
    }
  return k;
}

// ----------------------------------------------------------------------------
// GPPosterior

GPPosterior::GPPosterior(Kernel kernel, double eta2) : kernel_(kernel), eta2_(eta2) {
  if (!(eta2 > 0.0)) throw ArgumentError("GP posterior: eta2 must be positive");
}

GPPosterior::GPPosterior(Kernel kernel, double eta2, const PointCloud& inputs, std::span<const double> outputs)
    : GPPosterior(kernel, eta2) {
  if (inputs.size() != outputs.size()) throw ArgumentError("GP posterior: inputs and outputs differ in length");
  inputs_ = inputs;
  outputs_.assign(outputs.begin(), outputs.end());
  rebuild();
}

void GPPosterior::rebuild() {
  Eigen::MatrixXd c = gram_matrix(kernel_, inputs_);
  c.diagonal().array() += eta2_;
  JitteredFactor f = cholesky_with_jitter(c);
  lower_ = std::move(f.lower);
  jitter_ = f.jitter;
  factored_ = outputs_.size();
  since_rebuild_ = 0;
  refresh_weights();
}

void GPPosterior::refresh_weights() {
  const Eigen::Map<const Eigen::VectorXd> y(outputs_.data(), static_cast<Eigen::Index>(outputs_.size()));
  weights_ = lower_.triangularView<Eigen::Lower>().solve(y);
  lower_.triangularView<Eigen::Lower>().transpose().solveInPlace(weights_);
}

GPPosterior::Prediction GPPosterior::predict(std::span<const double> x) const {
  if (factored_ != outputs_.size()) throw InternalError("GP posterior: stale factorization");
  if (inputs_.size() > 0 && x.size() != inputs_.dim()) throw ArgumentError("GP posterior: dimension mismatch");
  const double prior = kernel_(x, x);
  if (outputs_.empty()) return {0.0, std::sqrt(std::max(0.0, prior)), std::max(0.0, prior)};
  const Eigen::Index t = static_cast<Eigen::Index>(outputs_.size());
  Eigen::VectorXd kx(t);
  for (Eigen::Index i = 0; i < t; ++i) kx(i) = kernel_(inputs_[static_cast<std::size_t>(i)], x);
  const double mu = kx.dot(weights_);
  const Eigen::VectorXd v = lower_.triangularView<Eigen::Lower>().solve(kx);
  double var = prior - v.squaredNorm();
  if (var < -1e-10 * std::max(1.0, prior)) throw NumericError("GP posterior: negative predictive variance");
  var = std::clamp(var, 0.0, std::max(0.0, prior));
  return {mu, std::sqrt(var), var};
}

GPPosterior GPPosterior::update(std::span<const double> x, double y) const {
  GPPosterior next = *this;
  next.update_in_place(x, y);
  return next;
}

void GPPosterior::update_in_place(std::span<const double> x, double y) {
  if (inputs_.size() > 0 && x.size() != inputs_.dim()) throw ArgumentError("GP posterior: dimension mismatch");
  const Eigen::Index t = static_cast<Eigen::Index>(outputs_.size());
  inputs_.push_back(x);
  outputs_.push_back(y);
  if (since_rebuild_ + 1 >= kRebuildInterval || t == 0) {
    rebuild();
    return;
  }
  // Extend the factor by one row: L_new = [[L, 0], [l^T, d]].
  Eigen::VectorXd kx(t);
  for (Eigen::Index i = 0; i < t; ++i) kx(i) = kernel_(inputs_[static_cast<std::size_t>(i)], x);
  const Eigen::VectorXd l = lower_.triangularView<Eigen::Lower>().solve(kx);
  const double d2 = kernel_(x, x) + eta2_ + jitter_ - l.squaredNorm();
  if (!(d2 > 0.0)) {
    rebuild();
    return;
  }
  Eigen::MatrixXd grown = Eigen::MatrixXd::Zero(t + 1, t + 1);
  grown.topLeftCorner(t, t) = lower_;
  grown.block(t, 0, 1, t) = l.transpose();
  grown(t, t) = std::sqrt(d2);
  lower_ = std::move(grown);
  factored_ = outputs_.size();
  ++since_rebuild_;
  refresh_weights();
}

// ----------------------------------------------------------------------------
// SpacePosterior

SpacePosterior::SpacePosterior(Eigen::MatrixXd prior_covariance, double eta2)
    : cov_(std::move(prior_covariance)), mean_(Eigen::VectorXd::Zero(cov_.rows())), eta2_(eta2) {
  if (cov_.rows() != cov_.cols()) throw ArgumentError("space posterior: covariance is not square");
  if (!(eta2 > 0.0)) throw ArgumentError("space posterior: eta2 must be positive");
}

void SpacePosterior::observe(PointId x, double y) {
  const Eigen::Index i = static_cast<Eigen::Index>(x);
  if (x >= size()) throw ArgumentError("space posterior: point id out of range");
  const Eigen::VectorXd s = cov_.col(i);
  const double denom = std::max(s(i), 0.0) + eta2_;
  mean_ += s * ((y - mean_(i)) / denom);
  cov_.noalias() -= (s / denom) * s.transpose();
  ++observations_;
}

double SpacePosterior::variance(PointId x) const {
  const Eigen::Index i = static_cast<Eigen::Index>(x);
  return std::max(0.0, cov_(i, i));
}

double SpacePosterior::sigma(PointId x) const { return std::sqrt(variance(x)); }

// ----------------------------------------------------------------------------
// Sampling

PriorSampler::PriorSampler(const Eigen::MatrixXd& covariance) : factor_(cholesky_with_jitter(covariance)) {}

Eigen::VectorXd PriorSampler::draw(Rng& rng) const {
  const Eigen::Index n = factor_.lower.rows();
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd z(n);
  for (Eigen::Index i = 0; i < n; ++i) z(i) = normal(rng);
  return factor_.lower.triangularView<Eigen::Lower>() * z;
}

std::vector<double> sample_prior(const Kernel& kernel, const PointCloud& points, std::uint64_t seed) {
  PriorSampler sampler(gram_matrix(kernel, points));
  Rng rng = make_stream(seed);
  const Eigen::VectorXd f = sampler.draw(rng);
  return {f.data(), f.data() + f.size()};
}

// ----------------------------------------------------------------------------
// Information gain

std::vector<double> information_gain_prefixes(const Eigen::MatrixXd& gram, double eta2) {
  if (!(eta2 > 0.0)) throw ArgumentError("information gain: eta2 must be positive");
  const Eigen::Index t = gram.rows();
  std::vector<double> out(static_cast<std::size_t>(t), 0.0);
  if (t == 0) return out;
  Eigen::MatrixXd a = gram / eta2;
  a.diagonal().array() += 1.0;
  Eigen::LLT<Eigen::MatrixXd> llt(a);
  if (llt.info() != Eigen::Success) throw NumericError("information gain: I + K/eta2 is not positive definite");
  const Eigen::MatrixXd l = llt.matrixL();
  double acc = 0.0;
  for (Eigen::Index i = 0; i < t; ++i) {
    acc += std::log(l(i, i));
    out[static_cast<std::size_t>(i)] = acc;
  }
  return out;
}

double information_gain(const Eigen::MatrixXd& gram, double eta2) {
  const auto prefixes = information_gain_prefixes(gram, eta2);
  return prefixes.empty() ? 0.0 : prefixes.back();
}

double information_gain(const Kernel& kernel, const PointCloud& points, double eta2) {
  return information_gain(gram_matrix(kernel, points), eta2);
}

namespace {

std::uint64_t binomial_capped(std::uint64_t n, std::uint64_t k, std::uint64_t cap) {
  k = std::min(k, n - k);
  long double c = 1.0L;
  for (std::uint64_t i = 1; i <= k; ++i) {
    c = c * static_cast<long double>(n - k + i) / static_cast<long double>(i);
    if (c > static_cast<long double>(cap)) return cap + 1;
  }
  return static_cast<std::uint64_t>(c + 0.5L);
}

}  // namespace

double gamma_t(const Eigen::MatrixXd& prior_covariance, std::size_t t, double eta2, GammaMode mode) {
  const std::size_t n = static_cast<std::size_t>(prior_covariance.rows());
  if (t == 0) return 0.0;
  if (t > n) throw ArgumentError("gamma_t: t exceeds the number of points");
  if (!(eta2 > 0.0)) throw ArgumentError("gamma_t: eta2 must be positive");

  if (mode == GammaMode::kGreedy) {
    SpacePosterior post(prior_covariance, eta2);
    std::vector<char> taken(n, 0);
    double gain = 0.0;
    for (std::size_t step = 0; step < t; ++step) {
      std::size_t best = n;
      for (std::size_t x = 0; x < n; ++x)
        if (!taken[x] && (best == n || post.variance(x) > post.variance(best))) best = x;
      gain += 0.5 * std::log1p(post.variance(best) / eta2);
      taken[best] = 1;
      post.observe(best, 0.0);
    }
    return gain;
  }

  if (binomial_capped(n, t, kGammaExactLimit) > kGammaExactLimit) {
    throw CapacityError("gamma_t: exact mode would enumerate more than 1e6 subsets");
  }
  std::vector<Eigen::Index> pick(t);
  std::iota(pick.begin(), pick.end(), Eigen::Index{0});
  const Eigen::Index tt = static_cast<Eigen::Index>(t);
  Eigen::MatrixXd sub(tt, tt);
  double best = 0.0;
  for (;;) {
    for (Eigen::Index a = 0; a < tt; ++a)
      for (Eigen::Index b = 0; b < tt; ++b) sub(a, b) = prior_covariance(pick[a], pick[b]);
    best = std::max(best, information_gain(sub, eta2));
    std::size_t pos = t;
    while (pos > 0 && pick[pos - 1] == static_cast<Eigen::Index>(n - t + pos - 1)) --pos;
    if (pos == 0) break;
    ++pick[pos - 1];
    for (std::size_t q = pos; q < t; ++q) pick[q] = pick[q - 1] + 1;
  }
  return best;
}

double gamma_t(const Kernel& kernel, const FiniteMetricSpace& space, std::size_t t, double eta2, GammaMode mode) {
  if (!space.has_points()) throw ArgumentError("gamma_t: the space has no coordinates");
  return gamma_t(gram_matrix(kernel, space.points()), t, eta2, mode);
}

double c_eta(double eta2) {
  if (!(eta2 > 0.0)) throw ArgumentError("c_eta: eta2 must be positive");
  return 2.0 / std::log1p(1.0 / eta2);
}

Interval squared_gaussian_interval(double mu, double sigma, double s) {
  if (!(sigma > 0.0) || !(s > 0.0)) throw ArgumentError("squared_gaussian_interval: sigma and s must be positive");
  const double half_width = std::sqrt(2.0) * sigma * s;
  return {std::max(0.0, std::abs(mu) - half_width), std::abs(mu) + half_width};
}

Interval squared_gp_bounds(double mu, double sigma, double u, int channels) {
  if (!(sigma >= 0.0) || !(u > 0.0) || channels < 1)
    throw ArgumentError("squared_gp_bounds: need sigma >= 0, u > 0 and at least one channel");
  const double half_width = std::sqrt(2.0 * (u + std::log(static_cast<double>(channels)))) * sigma;
  const double hi = std::abs(mu) + half_width;
  const double lo = std::max(0.0, std::abs(mu) - half_width);
  return {lo * lo, hi * hi};
}

}  // namespace chainbandit
