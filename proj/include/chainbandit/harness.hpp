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

#ifndef CHAINBANDIT_HARNESS_HPP_
#define CHAINBANDIT_HARNESS_HPP_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "chainbandit/bandit.hpp"
#include "chainbandit/chaining.hpp"
#include "chainbandit/kernel.hpp"
#include "chainbandit/metric.hpp"
#include "chainbandit/smoothness.hpp"

namespace chainbandit {

// Space generators:
//   grid(D, n_per_dim, extent)            n_per_dim^D points on [0, extent]^D
//   line(n)                               0, 1, ..., n-1
//   star(n)                               origin plus n points e_i / sqrt 2 in R^n
//   ellipsoid(D, n_per_dim, a_1..a_D)     grid over the box, clipped to sum (x_k/a_k)^2 <= 1
bool is_generator_expression(const std::string& text);
PointCloud generate_points(const std::string& expression);

// Loads a point cloud or a distance matrix file, or evaluates a generator.
// Point clouds use the kernel's canonical metric when one is given, else
// the Euclidean metric.
struct ResolvedSpace {
  std::optional<PointCloud> cloud;
  FiniteMetricSpace space;
};
ResolvedSpace resolve_space(const std::string& source, const std::optional<Kernel>& kernel = std::nullopt);
ResolvedSpace resolve_space(const std::string& source, const DistanceRule& rule);

enum class Objective { kGp, kSquaredGp };

struct ExperimentConfig {
  std::string space = "grid(1,64,1)";
  Kernel kernel{KernelFamily::kSquaredExponential, 0.2, 1.0};
  Objective objective = Objective::kGp;
  int channels = 1;
  double u = 2.0;
  double a = 2.0;
  double eta2 = 0.01;
  std::size_t t_max = 100;
  std::size_t replicates = 1;
  std::size_t draws = 1'000'000;  // Monte Carlo draws per lemma cell
  std::uint64_t seed = 0;
  std::string output_dir = "out";
  DepthRule depth_rule = DepthRule::kHalfLog2;
  CapacitySchedule schedule = CapacitySchedule::kGeometric;

  OptimizerConfig optimizer() const;
  // ConfigError on constraint violations; checks referenced files exist.
  void validate() const;
};

// `key = value` lines, '#' comments. Unknown keys are errors.
ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig parse_config(const std::string& path);

enum class Direction {
  kAtMost,     // rate <= bound + 3 se
  kAtLeast,    // rate >= bound - 3 se
  kMatch,      // |rate - bound| <= 3 se
  kBelow,      // rate < bound
  kAbove,      // rate > bound
};
const char* direction_name(Direction d);

struct ValidationRow {
  std::string claim;
  std::size_t trials = 0;
  std::size_t violations = 0;
  double rate = 0.0;
  double bound = 0.0;
  double std_error = 0.0;
  Direction direction = Direction::kAtMost;
  bool pass = false;
  std::string note;
};

struct ValidationReport {
  std::vector<ValidationRow> rows;
  std::vector<double> ratio_quantiles;  // lower suite: q05, q25, q50, q75, q95
  bool all_pass() const;
  const ValidationRow& row(const std::string& claim) const;
};

// sqrt(p (1 - p) / n).
double binomial_std_error(double p, std::size_t n);
// Fills std_error (from `rate` unless preset) and pass.
ValidationRow finalize(ValidationRow row);
// Linear interpolation between order statistics (R type 7).
double quantile(std::vector<double> values, double q);

void write_validation_report(std::ostream& out, const ValidationReport& report);

// Joint Monte Carlo check of sup_{x below s} f(x) - f(s) <= omega_h over every
// node, plus one row per depth. Spaces up to 256 points.
ValidationReport validate_upper(const ExperimentConfig& config);

// Checks sup_{x below s} f(x) - f(s) >= V(s) per depth with pruned nodes and
// records the ratio sup / functional at the root. Geometric schedule.
ValidationReport validate_lower(const ExperimentConfig& config);

// Squared-Gaussian tails (with the exact erf probability), independent and
// packed Gaussian maxima, squared-GP interval coverage.
ValidationReport validate_lemmas(const ExperimentConfig& config);

// P[X^2 outside (l^2, u^2)] for X ~ N(mu, sigma^2), via erfc.
double squared_gaussian_miss_probability(double mu, double sigma, double lower, double upper);

inline constexpr std::size_t kUpperSpaceLimit = 256;

struct ExperimentResult {
  std::vector<std::string> files;
  ValidationReport report;
  std::vector<RegretRecord> records;
};

// Runs the configured bandit over replicates and writes tree.csv,
// replicate_NNNN.csv, aggregate.csv and report.csv into output_dir.
// Outputs are removed again if anything fails.
ExperimentResult run_experiment(const ExperimentConfig& config);

struct BenchRow {
  std::size_t n = 0;
  double seconds = 0.0;
  int depth = 0;
  std::size_t nodes = 0;
};
// Tree build time (metric + forward + pruning) on seeded uniform points in
// the unit square; minimum over `repeats`.
std::vector<BenchRow> bench_tree_build(const std::vector<std::size_t>& sizes, int repeats, std::uint64_t seed);

}  // namespace chainbandit

#endif  // CHAINBANDIT_HARNESS_HPP_
