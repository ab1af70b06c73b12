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

#ifndef CHAINBANDIT_CHAINING_HPP_
#define CHAINBANDIT_CHAINING_HPP_

#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "chainbandit/metric.hpp"
#include "chainbandit/smoothness.hpp"

namespace chainbandit {

using NodeId = std::size_t;
inline constexpr NodeId kNoNode = std::numeric_limits<NodeId>::max();

// Capacity sequence n_h bounding the level sizes by e^{n_h}.
//   kGeometric: n_0 = 0, n_h = 2^h. Needed for pruning values and the lower bound.
//   kEntropy:   n_h = 2 log |GreedyCover(eps_h, X)|.
enum class CapacitySchedule { kGeometric, kEntropy };

const char* schedule_name(CapacitySchedule schedule);
CapacitySchedule parse_schedule(std::string_view name);

struct TreeNode {
  NodeId id = kNoNode;
  int depth = 0;
  PointId location = kNoPoint;  // pruned nodes carry their parent's location
  NodeId parent = kNoNode;
  bool pruned = false;
  double radius = 0.0;  // sup over descendants x of d(x, location)
  double value = 0.0;   // V_h: anti-concentration certificate
};

// A generic-chaining tree. Every point that enters at depth h is continued
// by a copy of itself at each deeper level, so level h holds all of T_{<=h}
// and the leaves, all at the deepest level, are in bijection with the points.
// Immutable once built; construct with build_forward / prune_backward.
class ChainingTree {
 public:
  ChainingTree() = default;

  // Assembles a tree from explicit nodes (ids must be 0..N-1 in order).
  // Radii and values are taken as given.
  static ChainingTree from_nodes(std::size_t space_size, std::vector<TreeNode> nodes, std::vector<double> epsilon,
                                 std::vector<double> capacity, CapacitySchedule schedule, int restart_count = 0,
                                 double pruning_u = 0.0);

  std::size_t size() const noexcept { return nodes_.size(); }
  std::size_t space_size() const noexcept { return space_size_; }
  const std::vector<TreeNode>& nodes() const noexcept { return nodes_; }
  const TreeNode& node(NodeId id) const;
  std::span<const NodeId> children(NodeId id) const;
  std::span<const NodeId> level(int depth) const;
  NodeId root() const noexcept { return nodes_.empty() ? kNoNode : NodeId{0}; }
  int max_depth() const noexcept { return static_cast<int>(levels_.size()) - 1; }

  // A non-pruned node whose non-pruned parent sits at the same point.
  bool is_continuation(NodeId id) const;

  // eps_h and n_h; depths past the stored schedule follow the same rule.
  double epsilon(int depth) const;
  double capacity(int depth) const;
  const std::vector<double>& epsilon_schedule() const noexcept { return epsilon_; }
  const std::vector<double>& capacity_schedule() const noexcept { return capacity_; }
  CapacitySchedule schedule() const noexcept { return schedule_; }
  double diameter() const noexcept { return epsilon_.empty() ? 0.0 : epsilon_.front(); }
  int epsilon_shift() const noexcept { return epsilon_shift_; }

  int restart_count() const noexcept { return restart_count_; }
  bool is_pruned_tree() const noexcept { return pruning_u_ > 0.0; }
  double pruning_u() const noexcept { return pruning_u_; }
  std::size_t pruned_node_count() const;

  // Deepest node at the given point (its leaf).
  NodeId leaf_of(PointId x) const;

 private:
  friend ChainingTree build_forward(const FiniteMetricSpace&, CapacitySchedule, int);
  friend ChainingTree prune_backward(const ChainingTree&, const FiniteMetricSpace&, double);
  void index();

  std::size_t space_size_ = 0;
  std::vector<TreeNode> nodes_;
  std::vector<std::vector<NodeId>> children_;
  std::vector<std::vector<NodeId>> levels_;
  std::vector<NodeId> leaf_of_;
  std::vector<double> epsilon_;
  std::vector<double> capacity_;
  CapacitySchedule schedule_ = CapacitySchedule::kGeometric;
  int epsilon_shift_ = 1;
  int restart_count_ = 0;
  double pruning_u_ = 0.0;
};

// Forward pass: eps_h = 2^{-h-shift} diam nets grown greedily from point 0,
// each new node attached to its nearest existing node. shift = 0 gives
// eps_h = diam 2^{-h}.
ChainingTree build_forward(const FiniteMetricSpace& space, CapacitySchedule schedule = CapacitySchedule::kGeometric,
                           int epsilon_shift = 1);

// Backward pass: caps every node at floor(e^{n_h - n_{h-1}}) children by moving
// the lowest-valued ones under a new pruned node, restarting when a pruned
// node itself overflows. Geometric schedule only.
ChainingTree prune_backward(const ChainingTree& tree, const FiniteMetricSpace& space, double u);

// Upper bound on the number of restarts: ceil(log log |X|) + 1.
int restart_limit(std::size_t space_size);

// max(0, alpha / sqrt 2 * sqrt(log(m / 3u)) - 2 delta) when m > 3u, else 0.
double phi(double alpha, double delta, double m, double u);
// Same, with log m supplied directly (m may overflow a double).
double phi_log_m(double alpha, double delta, double log_m, double u);

// omega_h for h = 0..max_depth: sup over leaves of
// sum_{i>h} psi*^{-1}(u_i, d(p_i(x), p_{i-1}(x))), u_i = u + n_i + a log i + log zeta(a).
// With `majorized`, the step distance is replaced by the radius of p_{i-1}(x).
std::vector<double> omega_table(const ChainingTree& tree, const FiniteMetricSpace& space, double u, double a,
                                const SmoothnessModel& model, bool majorized = false);
double omega(const ChainingTree& tree, const FiniteMetricSpace& space, int depth, double u, double a,
             const SmoothnessModel& model, bool majorized = false);

double lower_value(const ChainingTree& tree, NodeId node);

// sup over leaves x below `node` of sum_{i >= depth} radius(p_i(x)) 2^{i/2}.
double lower_bound_functional(const ChainingTree& tree, NodeId node);

// p_h(x): the ancestor of x at depth h, or x itself when x is no deeper than h.
NodeId parent_at_depth(const ChainingTree& tree, NodeId x, int depth);

struct TreeValidation {
  std::vector<std::string> failures;
  // |level h| > e^{n_h}; reported rather than fatal.
  std::vector<std::string> capacity_warnings;
  bool ok() const noexcept { return failures.empty(); }
};

TreeValidation validate_tree(const ChainingTree& tree, const FiniteMetricSpace& space);

}  // namespace chainbandit

#endif  // CHAINBANDIT_CHAINING_HPP_
