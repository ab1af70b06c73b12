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

#include "chainbandit/smoothness.hpp"

#include <cmath>
#include <sstream>

#include "chainbandit/errors.hpp"

namespace chainbandit {

SmoothnessModel SmoothnessModel::sub_gamma(double nu, double c) {
  if (!(nu >= 0.0) || !(c >= 0.0)) throw ArgumentError("sub-Gamma model: nu and c must be nonnegative");
  if (nu == 0.0 && c == 0.0) throw ArgumentError("sub-Gamma model: nu and c cannot both be zero");
  return SmoothnessModel(SubGammaTails{nu, c});
}

SmoothnessModel SmoothnessModel::squared_gp(int channels, double kappa) {
  if (channels < 1) throw ArgumentError("squared-GP model: need at least one channel");
  if (!(kappa > 0.0)) throw ArgumentError("squared-GP model: kappa must be positive");
  return SmoothnessModel(SquaredGpTails{channels, kappa});
}

std::string SmoothnessModel::describe() const {
  std::ostringstream out;
  std::visit(
      [&](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, GaussianTails>) {
          out << "gaussian";
        } else if constexpr (std::is_same_v<T, SubGammaTails>) {
          out << "subgamma(nu=" << m.nu << ",c=" << m.c << ")";
        } else {
          out << "squared_gp(N=" << m.channels << ",kappa=" << m.kappa << ")";
        }
      },
      v_);
  return out.str();
}

double ell_u(const SmoothnessModel& model, double u, double dist) {
  if (!(u > 0.0)) throw ArgumentError("ell_u: u must be positive");
  if (!(dist >= 0.0)) throw ArgumentError("ell_u: distance must be nonnegative");
  return std::visit(
      [&](const auto& m) -> double {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, GaussianTails>) {
          return std::sqrt(2.0 * u) * dist;
        } else if constexpr (std::is_same_v<T, SubGammaTails>) {
          return (m.c * u + std::sqrt(2.0 * m.nu * u)) * dist;
        } else {
          return (u + std::sqrt(2.0 * u * m.channels)) * dist;
        }
      },
      model.variant());
}

double psi_star_inv(const SmoothnessModel& model, double u, double delta) { return ell_u(model, u, delta); }

double squared_gp_metric(double k_xy, double kappa) {
  if (!(kappa > 0.0)) throw ArgumentError("squared_gp_metric: kappa must be positive");
  if (std::abs(k_xy) > kappa + 1e-9) throw ArgumentError("squared_gp_metric: |k(x,y)| exceeds kappa");
  return 2.0 * std::sqrt(std::max(0.0, kappa * kappa - k_xy * k_xy));
}

double zeta(double a) {
  if (!(a > 1.0)) throw ArgumentError("zeta: the series diverges for a <= 1");
  // Partial sum up to K - 1, then the integral tail from K with
  // Euler-Maclaurin corrections. K doubles until the first omitted
  // correction, a(a+1)...(a+6) K^{-a-7} / 1209600, is negligible.
  double K = 16.0;
  auto omitted = [a](double k) {
    double p = 1.0;
    for (int j = 0; j < 7; ++j) p *= a + j;
    return p * std::pow(k, -a - 7.0) / 1209600.0;
  };
  while (omitted(K) > 1e-14 && K < 1e7) K *= 2.0;

  double sum = 0.0;
  for (double k = K - 1.0; k >= 1.0; k -= 1.0) sum += std::pow(k, -a);
  const double kpow = std::pow(K, -a);
  const double tail = K * kpow / (a - 1.0) + 0.5 * kpow + a * kpow / (12.0 * K) -
                      a * (a + 1.0) * (a + 2.0) * kpow / (720.0 * K * K * K) +
                      a * (a + 1.0) * (a + 2.0) * (a + 3.0) * (a + 4.0) * kpow / (30240.0 * std::pow(K, 5.0));
  return sum + tail;
}

double confidence_level_u_i(double u, double n_h, long long i, double a) {
  if (i < 1) throw ArgumentError("confidence_level_u_i: iteration index must be at least 1");
  return u + n_h + a * std::log(static_cast<double>(i)) + std::log(zeta(a));
}

}  // namespace chainbandit
