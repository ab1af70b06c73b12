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

#include "chainbandit/kernel.hpp"

#include <charconv>
#include <cstdio>
#include <cmath>
#include <string>

#include "chainbandit/errors.hpp"
#include "chainbandit/smoothness.hpp"

namespace chainbandit {

namespace {

double squared_norm_diff(std::span<const double> x, std::span<const double> y) {
  double s = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double d = x[k] - y[k];
    s += d * d;
  }
  return s;
}

double matern(double p_times_two, double r) {
  // k = h_p(sqrt(2p) r) exp(-sqrt(2p) r) for half-integer p.
  const double z = std::sqrt(p_times_two) * r;
  double h = 1.0;
  if (p_times_two == 3.0) h = 1.0 + z;
  if (p_times_two == 5.0) h = 1.0 + z + z * z / 3.0;
  return h * std::exp(-z);
}

double parse_number(std::string_view text, std::string_view spec) {
  double value = 0.0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) throw ArgumentError("kernel spec: bad number in '" + std::string(spec) + "'");
  return value;
}

}  // namespace

double Kernel::operator()(std::span<const double> x, std::span<const double> y) const {
  switch (family) {
    case KernelFamily::kLinear: {
      double dot = 0.0;
      for (std::size_t k = 0; k < x.size(); ++k) dot += x[k] * y[k];
      return variance * dot;
    }
    case KernelFamily::kSquaredExponential:
      return variance * std::exp(-0.5 * squared_norm_diff(x, y) / (lengthscale * lengthscale));
    case KernelFamily::kMatern12:
      return variance * matern(1.0, std::sqrt(squared_norm_diff(x, y)) / lengthscale);
    case KernelFamily::kMatern32:
      return variance * matern(3.0, std::sqrt(squared_norm_diff(x, y)) / lengthscale);
    case KernelFamily::kMatern52:
      return variance * matern(5.0, std::sqrt(squared_norm_diff(x, y)) / lengthscale);
  }
  throw InternalError("kernel: unknown family");
}

double kernel_eval(const Kernel& kernel, std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw ArgumentError("kernel_eval: dimension mismatch");
  return kernel(x, y);
}

Kernel parse_kernel(std::string_view spec) {
  Kernel kernel;
  const auto colon = spec.find(':');
  const std::string_view name = spec.substr(0, colon);
  if (name == "se") {
    kernel.family = KernelFamily::kSquaredExponential;
  } else if (name == "ou" || name == "matern12") {
    kernel.family = KernelFamily::kMatern12;
  } else if (name == "matern32") {
    kernel.family = KernelFamily::kMatern32;
  } else if (name == "matern52") {
    kernel.family = KernelFamily::kMatern52;
  } else if (name == "linear") {
    kernel.family = KernelFamily::kLinear;
  } else {
    throw ArgumentError("kernel spec: unknown family '" + std::string(name) + "'");
  }
  if (colon == std::string_view::npos) return kernel;

  std::string_view rest = spec.substr(colon + 1);
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    const std::string_view item = rest.substr(0, comma);
    rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
    const auto eq = item.find('=');
    if (eq == std::string_view::npos) throw ArgumentError("kernel spec: expected key=value in '" + std::string(spec) + "'");
    const std::string_view key = item.substr(0, eq);
    const double value = parse_number(item.substr(eq + 1), spec);
    if (key == "ls") {
      kernel.lengthscale = value;
    } else if (key == "var") {
      kernel.variance = value;
    } else {
      throw ArgumentError("kernel spec: unknown parameter '" + std::string(key) + "'");
    }
  }
  if (!(kernel.lengthscale > 0.0)) throw ArgumentError("kernel spec: lengthscale must be positive");
  if (!(kernel.variance > 0.0)) throw ArgumentError("kernel spec: variance must be positive");
  return kernel;
}

std::string format_kernel(const Kernel& kernel) {
  std::string out;
  switch (kernel.family) {
    case KernelFamily::kSquaredExponential: out = "se"; break;
    case KernelFamily::kMatern12: out = "matern12"; break;
    case KernelFamily::kMatern32: out = "matern32"; break;
    case KernelFamily::kMatern52: out = "matern52"; break;
    case KernelFamily::kLinear: out = "linear"; break;
  }
  char buf[64];
  if (kernel.family != KernelFamily::kLinear) {
    std::snprintf(buf, sizeof buf, ":ls=%.12g", kernel.lengthscale);
    out += buf;
    if (kernel.variance != 1.0) {
      std::snprintf(buf, sizeof buf, ",var=%.12g", kernel.variance);
      out += buf;
    }
  } else if (kernel.variance != 1.0) {
    std::snprintf(buf, sizeof buf, ":var=%.12g", kernel.variance);
    out += buf;
  }
  return out;
}

DistanceRule kernel_canonical_rule(const Kernel& kernel) {
  return {"kernel:" + format_kernel(kernel),
          [kernel](std::span<const double> x, std::span<const double> y) {
            const double d2 = kernel(x, x) - 2.0 * kernel(x, y) + kernel(y, y);
            return std::sqrt(std::max(0.0, d2));
          },
          1e-7};
}

DistanceRule squared_gp_rule(const Kernel& kernel) {
  if (!kernel.stationary()) throw ArgumentError("squared_gp_rule: kernel must be stationary");
  return {"squared_gp:" + format_kernel(kernel),
          [kernel](std::span<const double> x, std::span<const double> y) {
            return squared_gp_metric(kernel(x, y), kernel.variance);
          },
          1e-7};
}

}  // namespace chainbandit
