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

#include "chainbandit/bandit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "chainbandit/errors.hpp"

namespace chainbandit {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Bounds {
  double lower;
  double upper;
};

double max_of(std::span<const double> v) {
  if (v.empty()) throw ArgumentError("truth vector is empty");
  return *std::max_element(v.begin(), v.end());
}

void check_inputs(const Eigen::MatrixXd& cov, const ChainingTree& tree, std::span<const double> omega) {
  if (cov.rows() != cov.cols()) throw ArgumentError("prior covariance must be square");
  if (static_cast<std::size_t>(cov.rows()) != tree.space_size()) {
    throw ArgumentError("prior covariance and tree cover different point counts");
  }
  if (omega.size() != static_cast<std::size_t>(tree.max_depth()) + 1) {
    throw ArgumentError("omega table length does not match tree depth");
  }
}

}  // namespace

const char* depth_rule_name(DepthRule rule) {
  return rule == DepthRule::kHalfLog2 ? "halflog2" : "omega";
}

DepthRule parse_depth_rule(std::string_view name) {
  if (name == "halflog2") return DepthRule::kHalfLog2;
  if (name == "omega") return DepthRule::kOmegaThreshold;
  throw ArgumentError("unknown depth rule '" + std::string(name) + "' (expected halflog2 or omega)");
}

void OptimizerConfig::validate() const {
  if (!(u > 0.0)) throw ConfigError("u must be positive");
  if (!(a > 1.0)) throw ConfigError("a must exceed 1");
  if (!(eta2 > 0.0)) throw ConfigError("eta2 must be positive");
}

std::vector<PointId> RegretRecord::queries() const {
  std::vector<PointId> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(r.point);
  return out;
}

int depth_half_log2(std::size_t i, int max_depth) {
  if (i == 0) throw ArgumentError("iteration index must be at least 1");
  int h = 0;
  // smallest h with 4^h >= i
  for (std::size_t p = 1; p < i; p *= 4) ++h;
  return std::min(h, std::max(0, max_depth));
}

double omega_threshold(std::size_t i) {
  if (i < 2) throw ArgumentError("omega threshold needs i >= 2");
  // sqrt(log j / j) rises from j = 2 to j = 3 and falls afterwards.
  const double j2 = std::sqrt(std::log(2.0) / 2.0);
  const double ji = std::sqrt(std::log(static_cast<double>(i)) / static_cast<double>(i));
  return std::min(j2, ji);
}

int depth_omega_threshold(std::span<const double> omega_table, std::size_t i) {
  if (omega_table.empty()) throw ArgumentError("empty omega table");
  const double threshold = omega_threshold(i);
  for (std::size_t h = 0; h < omega_table.size(); ++h) {
    if (omega_table[h] <= threshold) return static_cast<int>(h);
  }
  return static_cast<int>(omega_table.size()) - 1;
}

int depth_omega_threshold(const ChainingTree& tree, const FiniteMetricSpace& space, const SmoothnessModel& model,
                          double u, double a, std::size_t i) {
  return depth_omega_threshold(omega_table(tree, space, u, a, model), i);
}

std::vector<std::vector<PointId>> candidate_levels(const ChainingTree& tree) {
  std::vector<std::vector<PointId>> out;
  std::vector<char> seen(tree.space_size(), 0);
  std::vector<PointId> acc;
  for (int h = 0; h <= tree.max_depth(); ++h) {
    for (NodeId id : tree.level(h)) {
      const TreeNode& n = tree.node(id);
      if (n.pruned || seen[n.location]) continue;
      seen[n.location] = 1;
      acc.push_back(n.location);
    }
    std::sort(acc.begin(), acc.end());
    out.push_back(acc);
  }
  return out;
}

ChainingTree build_search_tree(const FiniteMetricSpace& space, CapacitySchedule schedule, double u) {
  ChainingTree tree = build_forward(space, schedule);
  if (schedule == CapacitySchedule::kGeometric) return prune_backward(tree, space, u);
  return tree;
}

// ---------------------------------------------------------------------------
// GpUcb

GpUcb::GpUcb(const Eigen::MatrixXd& prior_covariance, const ChainingTree& tree, std::vector<double> omega_table,
             OptimizerConfig config)
    : posterior_(prior_covariance, config.eta2),
      tree_(&tree),
      candidates_(candidate_levels(tree)),
      omega_(std::move(omega_table)),
      config_(config) {
  config_.validate();
  check_inputs(prior_covariance, tree, omega_);
}

int GpUcb::depth(std::size_t i) const {
  if (i == 0) throw ArgumentError("iteration index must be at least 1");
  if (config_.depth_rule == DepthRule::kHalfLog2) return depth_half_log2(i, tree_->max_depth());
  return i < 2 ? 0 : depth_omega_threshold(omega_, i);
}

double GpUcb::u_at(std::size_t i) const {
  return confidence_level_u_i(config_.u, tree_->capacity(depth(i)), static_cast<long long>(i), config_.a);
}

UcbChoice GpUcb::step(std::size_t i) const {
  UcbChoice c;
  c.depth = depth(i);
  c.u_i = u_at(i);
  const auto& level = candidates_[c.depth];
  if (level.empty()) throw InternalError("empty candidate level at depth " + std::to_string(c.depth));
  const double scale = std::sqrt(2.0 * c.u_i);
  c.ucb = -std::numeric_limits<double>::infinity();
  for (PointId x : level) {
    const double v = posterior_.mean(x) + posterior_.sigma(x) * scale;
    if (v > c.ucb) {
      c.ucb = v;
      c.x = x;
    }
  }
  return c;
}

// ---------------------------------------------------------------------------
// Loops

namespace {

RegretRecord gp_loop(const Eigen::MatrixXd& cov, const ChainingTree& tree, std::span<const double> omega,
                     const OptimizerConfig& config, std::span<const double> truth,
                     const std::function<double(PointId)>& observe) {
  GpUcb opt(cov, tree, std::vector<double>(omega.begin(), omega.end()), config);
  RegretRecord rec;
  rec.has_truth = !truth.empty();
  if (rec.has_truth && truth.size() != tree.space_size()) throw ArgumentError("truth length mismatch");
  const double best = rec.has_truth ? max_of(truth) : kNaN;
  double cum = 0.0, best_seen = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i <= config.t_max; ++i) {
    const UcbChoice c = opt.step(i);
    RegretRow r;
    r.iter = i;
    r.depth = c.depth;
    r.u_i = c.u_i;
    r.point = c.x;
    r.ucb = c.ucb;
    r.omega = omega[c.depth];
    r.prior_variance = opt.posterior().variance(c.x);
    const double sigma = opt.posterior().sigma(c.x);
    const double half = sigma * std::sqrt(2.0 * c.u_i);
    r.width = 2.0 * half;
    r.y = observe(c.x);
    if (rec.has_truth) {
      const double fx = truth[c.x];
      r.covered = std::abs(fx - opt.posterior().mean(c.x)) <= half;
      r.inst_regret = best - fx;
      cum += r.inst_regret;
      best_seen = std::max(best_seen, fx);
      r.cum_regret = cum;
      r.simple_regret = best - best_seen;
    } else {
      r.inst_regret = r.cum_regret = r.simple_regret = kNaN;
    }
    opt.observe(c.x, r.y);
    rec.rows.push_back(r);
  }
  return rec;
}

}  // namespace

RegretRecord run_gp_ucb(const Eigen::MatrixXd& prior_covariance, const ChainingTree& tree,
                        std::span<const double> omega_table, const OptimizerConfig& config,
                        std::span<const double> truth) {
  if (truth.empty()) throw ArgumentError("simulation mode needs a sampled truth");
  Rng noise_rng = make_stream(config.seed, 1);
  std::normal_distribution<double> noise(0.0, std::sqrt(config.eta2));
  return gp_loop(prior_covariance, tree, omega_table, config, truth,
                 [&](PointId x) { return truth[x] + noise(noise_rng); });
}

RegretRecord run_gp_ucb_live(const Eigen::MatrixXd& prior_covariance, const ChainingTree& tree,
                             std::span<const double> omega_table, const OptimizerConfig& config,
                             const std::function<double(PointId)>& observe) {
  if (!observe) throw ArgumentError("live mode needs an observation callback");
  return gp_loop(prior_covariance, tree, omega_table, config, {}, observe);
}

RegretRecord run_squared_gp_ucb(const Eigen::MatrixXd& prior_covariance, const ChainingTree& tree,
                                std::span<const double> omega_table, const OptimizerConfig& config,
                                const std::vector<std::vector<double>>& truth) {
  const std::size_t channels = truth.size();
  if (channels == 0) throw ArgumentError("squared-GP run needs at least one channel");
  const std::size_t n = tree.space_size();
  for (const auto& g : truth) {
    if (g.size() != n) throw ArgumentError("channel truth length mismatch");
  }
  // Channels share the prior, so one optimizer drives depth, u_i and candidates.
  GpUcb driver(prior_covariance, tree, std::vector<double>(omega_table.begin(), omega_table.end()), config);
  std::vector<SpacePosterior> post(channels, SpacePosterior(prior_covariance, config.eta2));
  const auto levels = candidate_levels(tree);

  std::vector<double> f(n, 0.0);
  for (std::size_t x = 0; x < n; ++x) {
    for (const auto& g : truth) f[x] -= g[x] * g[x];
  }
  const double best = max_of(f);
  Rng noise_rng = make_stream(config.seed, 1);
  std::normal_distribution<double> noise(0.0, std::sqrt(config.eta2));
  const int N = static_cast<int>(channels);

  auto bounds_at = [&](PointId x, double u_i) {
    Bounds b{0.0, 0.0};
    for (const auto& p : post) {
      const Interval iv = squared_gp_bounds(p.mean(x), p.sigma(x), u_i, N);
      b.upper -= iv.lower;
      b.lower -= iv.upper;
    }
    return b;
  };

  RegretRecord rec;
  rec.channels = channels;
  double cum = 0.0, best_seen = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i <= config.t_max; ++i) {
    const int h = driver.depth(i);
    const double u_i = driver.u_at(i);
    const auto& level = levels[h];
    PointId x = kNoPoint;
    double ucb = -std::numeric_limits<double>::infinity();
    for (PointId c : level) {
      const double v = bounds_at(c, u_i).upper;
      if (v > ucb) {
        ucb = v;
        x = c;
      }
    }
    if (x == kNoPoint) throw InternalError("empty candidate level at depth " + std::to_string(h));
    const Bounds b = bounds_at(x, u_i);
    RegretRow r;
    r.iter = i;
    r.depth = h;
    r.u_i = u_i;
    r.point = x;
    r.ucb = ucb;
    r.omega = omega_table[h];
    r.width = b.upper - b.lower;
    r.prior_variance = post[0].variance(x);
    for (std::size_t j = 0; j < channels; ++j) {
      const Interval iv = squared_gp_bounds(post[j].mean(x), post[j].sigma(x), u_i, N);
      const double g2 = truth[j][x] * truth[j][x];
      if (g2 < iv.lower || g2 > iv.upper) r.covered = false;
    }
    for (std::size_t j = 0; j < channels; ++j) {
      const double y = truth[j][x] + noise(noise_rng);
      if (j == 0) r.y = y;
      post[j].observe(x, y);
    }
    r.inst_regret = best - f[x];
    cum += r.inst_regret;
    best_seen = std::max(best_seen, f[x]);
    r.cum_regret = cum;
    r.simple_regret = best - best_seen;
    rec.rows.push_back(r);
  }
  return rec;
}

// ---------------------------------------------------------------------------
// Bounds

RegretBound regret_bound_rhs(const RegretRecord& record, const Eigen::MatrixXd& prior_covariance,
                             const OptimizerConfig& config) {
  const std::size_t n = static_cast<std::size_t>(prior_covariance.rows());
  RegretBound out;
  double sum_chain = 0.0, sum_omega = 0.0;
  for (const auto& r : record.rows) {
    if (r.point >= n) throw ArgumentError("record queries a point outside the prior covariance");
    sum_chain += r.omega + r.width;
    out.chaining.push_back(sum_chain);
  }
  if (record.channels != 1 || record.rows.empty()) return out;

  const std::size_t t = record.rows.size();
  Eigen::MatrixXd gram(t, t);
  for (std::size_t i = 0; i < t; ++i) {
    for (std::size_t j = 0; j < t; ++j) {
      gram(i, j) = prior_covariance(record.rows[i].point, record.rows[j].point);
    }
  }
  out.info_gain = information_gain_prefixes(gram, config.eta2);
  const double ce = c_eta(config.eta2);
  double u_t = 0.0;
  for (std::size_t k = 0; k < t; ++k) {
    sum_omega += record.rows[k].omega;
    u_t = std::max(u_t, record.rows[k].u_i);
    const double steps = static_cast<double>(k + 1);
    out.closed_form.push_back(2.0 * std::sqrt(2.0 * ce * steps * u_t * out.info_gain[k]) + sum_omega);
  }
  return out;
}

bool regret_within_bound(const RegretRecord& record, const RegretBound& bound) {
  if (!record.has_truth) throw ArgumentError("regret check needs a simulation-mode record");
  if (bound.chaining.size() != record.rows.size()) throw ArgumentError("bound and record lengths differ");
  for (std::size_t k = 0; k < record.rows.size(); ++k) {
    if (record.rows[k].cum_regret > bound.chaining[k]) return false;
  }
  return true;
}

}  // namespace chainbandit
