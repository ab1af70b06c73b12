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

#ifndef CHAINBANDIT_KERNEL_HPP_
#define CHAINBANDIT_KERNEL_HPP_

#include <span>
#include <string>
#include <string_view>

#include "chainbandit/metric.hpp"

namespace chainbandit {

enum class KernelFamily {
  kSquaredExponential,
  kMatern12,  // Ornstein-Uhlenbeck
  kMatern32,
  kMatern52,
  kLinear,
};

struct Kernel {
  KernelFamily family = KernelFamily::kSquaredExponential;
  double lengthscale = 1.0;
  double variance = 1.0;

  double operator()(std::span<const double> x, std::span<const double> y) const;
  bool stationary() const noexcept { return family != KernelFamily::kLinear; }
};

// Throws ArgumentError on a dimension mismatch.
double kernel_eval(const Kernel& kernel, std::span<const double> x, std::span<const double> y);

// Spec strings: "se:ls=1.0", "matern12:ls=..", "matern32:ls=0.5", "matern52:ls=..",
// "ou:ls=1.0", "linear". An optional ",var=<v>" sets the variance scale.
Kernel parse_kernel(std::string_view spec);
std::string format_kernel(const Kernel& kernel);

// d(x,y) = sqrt(k(x,x) - 2 k(x,y) + k(y,y)).
DistanceRule kernel_canonical_rule(const Kernel& kernel);

// d(x,y) = 2 sqrt(kappa^2 - k(x,y)^2) with kappa = k(x,x); stationary kernels only.
DistanceRule squared_gp_rule(const Kernel& kernel);

}  // namespace chainbandit

#endif  // CHAINBANDIT_KERNEL_HPP_
