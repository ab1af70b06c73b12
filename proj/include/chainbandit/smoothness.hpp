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

#ifndef CHAINBANDIT_SMOOTHNESS_HPP_
#define CHAINBANDIT_SMOOTHNESS_HPP_

#include <string>
#include <variant>

namespace chainbandit {

// Increments f(x) - f(y) are Gaussian with standard deviation d(x, y).
struct GaussianTails {};

// log E exp(l (f(x) - f(y))) <= nu l^2 d^2 / (2 (1 - c l d)).
struct SubGammaTails {
  double nu = 1.0;
  double c = 0.0;
};

// f = -sum_{j<=channels} g_j^2 with g_j i.i.d. GP(0, k) and k(x, x) = kappa.
// Sub-Gamma with nu = channels and c = 1 for the squared-GP canonical metric.
struct SquaredGpTails {
  int channels = 1;
  double kappa = 1.0;
};

class SmoothnessModel {
 public:
  using Variant = std::variant<GaussianTails, SubGammaTails, SquaredGpTails>;

  SmoothnessModel() = default;
  static SmoothnessModel gaussian() { return SmoothnessModel(GaussianTails{}); }
  static SmoothnessModel sub_gamma(double nu, double c);
  static SmoothnessModel squared_gp(int channels, double kappa);

  const Variant& variant() const noexcept { return v_; }
  std::string describe() const;

 private:
  explicit SmoothnessModel(Variant v) : v_(v) {}
  Variant v_ = GaussianTails{};
};

// Upper bound on the e^{-u} quantile of f(x) - f(y) at distance `dist`.
double ell_u(const SmoothnessModel& model, double u, double dist);

// Closed-form psi*^{-1}(u, delta). The Chernoff bounds are taken as the
// definition, so this coincides with ell_u(model, u, delta).
double psi_star_inv(const SmoothnessModel& model, double u, double delta);

// 2 sqrt(kappa^2 - k_xy^2): canonical distance of a squared GP channel.
double squared_gp_metric(double k_xy, double kappa);

// Riemann zeta for a > 1, absolute error below 1e-10.
double zeta(double a);

// u + n_h + a log i + log zeta(a): confidence level that survives a union
// bound over e^{n_h} nodes and over all iterations i >= 1.
double confidence_level_u_i(double u, double n_h, long long i, double a);

}  // namespace chainbandit

#endif  // CHAINBANDIT_SMOOTHNESS_HPP_
