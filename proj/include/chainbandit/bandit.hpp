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

#ifndef CHAINBANDIT_BANDIT_HPP_
#define CHAINBANDIT_BANDIT_HPP_

#include <cstdint>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "chainbandit/chaining.hpp"
#include "chainbandit/gp.hpp"
#include "chainbandit/kernel.hpp"
#include "chainbandit/metric.hpp"
#include "chainbandit/smoothness.hpp"

namespace chainbandit {

enum class DepthRule { kHalfLog2, kOmegaThreshold };

const char* depth_rule_name(DepthRule rule);
DepthRule parse_depth_rule(std::string_view name);  // "halflog2" | "omega"

struct OptimizerConfig {
  double u = 2.0;
  double a = 2.0;
  double eta2 = 0.01;
  std::size_t t_max = 100;
  DepthRule depth_rule = DepthRule::kHalfLog2;
  CapacitySchedule schedule = CapacitySchedule::kGeometric;
  std::uint64_t seed = 0;

  // Throws ConfigError on a constraint violation.
  void validate() const;
};

struct RegretRow {
  std::size_t iter = 0;
  int depth = 0;
  double u_i = 0.0;
  PointId point = kNoPoint;
  double ucb = 0.0;
  double y = 0.0;                // observation (first channel for squared-GP runs)
  double inst_regret = 0.0;      // NaN in live mode
  double cum_regret = 0.0;       // NaN in live mode
  double simple_regret = 0.0;    // NaN in live mode
  double width = 0.0;            // U_i(x_i) - L_i(x_i)
  double omega = 0.0;            // omega_{h(i)}
  double prior_variance = 0.0;   // sigma_{i-1}^2(x_i)
  bool covered = true;           // truth inside [L_i, U_i] at x_i (every channel)
};

struct RegretRecord {
  std::vector<RegretRow> rows;
  bool has_truth = true;
  std::size_t channels = 1;  // >1 for squared-GP runs
  std::vector<PointId> queries() const;
};

// ceil(log2(i) / 2) computed exactly, clamped to max_depth.
int depth_half_log2(std::size_t i, int max_depth);

// sqrt(log i / i) made non-increasing in i: min over 2 <= j <= i.
double omega_threshold(std::size_t i);

// Smallest h with omega[h] <= omega_threshold(i); the deepest level when none.
// Throws ArgumentError for i < 2.
int depth_omega_threshold(std::span<const double> omega_table, std::size_t i);
int depth_omega_threshold(const ChainingTree& tree, const FiniteMetricSpace& space, const SmoothnessModel& model,
                          double u, double a, std::size_t i);

// Distinct locations of non-pruned nodes at depth <= h, ascending, for every h.
std::vector<std::vector<PointId>> candidate_levels(const ChainingTree& tree);

// Builds the tree the optimizer uses: the geometric schedule is pruned at u,
// the entropy schedule is used unpruned.
ChainingTree build_search_tree(const FiniteMetricSpace& space, CapacitySchedule schedule, double u);

struct UcbChoice {
  PointId x = kNoPoint;
  double u_i = 0.0;
  int depth = 0;
  double ucb = 0.0;
};

// Chaining-UCB over a finite space with a Gaussian posterior.
class GpUcb {
 public:
  GpUcb(const Eigen::MatrixXd& prior_covariance, const ChainingTree& tree, std::vector<double> omega_table,
        OptimizerConfig config);

  int depth(std::size_t i) const;
  double u_at(std::size_t i) const;
  // Argmax of mu + sigma sqrt(2 u_i) over the level; smallest id on ties.
  UcbChoice step(std::size_t i) const;
  void observe(PointId x, double y) { posterior_.observe(x, y); }

  const SpacePosterior& posterior() const noexcept { return posterior_; }
  const std::vector<double>& omega_table() const noexcept { return omega_; }
  const OptimizerConfig& config() const noexcept { return config_; }

 private:
  SpacePosterior posterior_;
  const ChainingTree* tree_;
  std::vector<std::vector<PointId>> candidates_;
  std::vector<double> omega_;
  OptimizerConfig config_;
};

// Simulation mode: y_i = truth[x_i] + N(0, eta2), noise drawn from config.seed.
RegretRecord run_gp_ucb(const Eigen::MatrixXd& prior_covariance, const ChainingTree& tree,
                        std::span<const double> omega_table, const OptimizerConfig& config,
                        std::span<const double> truth);

// Live mode: observations come from `observe(x)`; regret columns are NaN.
RegretRecord run_gp_ucb_live(const Eigen::MatrixXd& prior_covariance, const ChainingTree& tree,
                             std::span<const double> omega_table, const OptimizerConfig& config,
                             const std::function<double(PointId)>& observe);

// f = -sum_j g_j^2 with every channel g_j observed (noisily) at each query.
// truth[j][x] = g_j(x). The tree and omega table should come from the
// squared-GP metric and model.
RegretRecord run_squared_gp_ucb(const Eigen::MatrixXd& prior_covariance, const ChainingTree& tree,
                                std::span<const double> omega_table, const OptimizerConfig& config,
                                const std::vector<std::vector<double>>& truth);

struct RegretBound {
  std::vector<double> chaining;     // sum_{i<=t} omega_{h(i)} + U_i(x_i) - L_i(x_i)
  std::vector<double> closed_form;  // 2 sqrt(2 c_eta t u_t I(X_t)) + sum omega; GP runs only
  std::vector<double> info_gain;    // I(X_t); GP runs only
};

// Entry t-1 of each sequence holds the bound after t queries.
RegretBound regret_bound_rhs(const RegretRecord& record, const Eigen::MatrixXd& prior_covariance,
                             const OptimizerConfig& config);

// True when R_t <= chaining bound for every t.
bool regret_within_bound(const RegretRecord& record, const RegretBound& bound);

}  // namespace chainbandit

#endif  // CHAINBANDIT_BANDIT_HPP_
