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

#include "chainbandit/chaining.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "chainbandit/errors.hpp"

namespace chainbandit {
namespace {

constexpr double kLog2 = 0.69314718055994530942;
// e^40 is far beyond any level we can materialize.
constexpr double kMaxLogCapacity = 40.0;

double geometric_capacity(int depth) { return depth <= 0 ? 0.0 : std::ldexp(1.0, depth); }

double epsilon_at(double diameter, int depth, int shift) {
  return depth == 0 ? diameter : std::ldexp(diameter, -(depth + shift));
}

// floor(e^{log_count}), saturated.
double child_capacity(double log_count) {
  if (log_count >= kMaxLogCapacity) return std::exp(kMaxLogCapacity);
  return std::floor(std::exp(log_count) + 1e-9);
}

std::string fmt(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

}  // namespace

const char* schedule_name(CapacitySchedule schedule) {
  return schedule == CapacitySchedule::kGeometric ? "geometric" : "entropy";
}

CapacitySchedule parse_schedule(std::string_view name) {
  if (name == "geometric") return CapacitySchedule::kGeometric;
  if (name == "entropy") return CapacitySchedule::kEntropy;
  throw ArgumentError("unknown capacity schedule '" + std::string(name) + "' (expected geometric or entropy)");
}

// ---------------------------------------------------------------------------
// ChainingTree

ChainingTree ChainingTree::from_nodes(std::size_t space_size, std::vector<TreeNode> nodes,
                                      std::vector<double> epsilon, std::vector<double> capacity,
                                      CapacitySchedule schedule, int restart_count, double pruning_u) {
  if (nodes.empty()) throw ArgumentError("tree must have at least one node");
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i].id != i) throw ArgumentError("node ids must be 0..N-1 in order");
    const NodeId p = nodes[i].parent;
    if (i == 0) {
      if (p != kNoNode || nodes[i].depth != 0) throw ArgumentError("node 0 must be the root at depth 0");
    } else if (p == kNoNode || p >= nodes.size()) {
      throw ArgumentError("node " + std::to_string(i) + " has an invalid parent");
    }
    if (nodes[i].location >= space_size) {
      throw ArgumentError("node " + std::to_string(i) + " has a location outside the space");
    }
    if (nodes[i].depth < 0) throw ArgumentError("negative depth");
  }
  if (epsilon.empty()) throw ArgumentError("epsilon schedule must be non-empty");
  ChainingTree tree;
  tree.space_size_ = space_size;
  tree.nodes_ = std::move(nodes);
  tree.epsilon_ = std::move(epsilon);
  tree.capacity_ = std::move(capacity);
  tree.schedule_ = schedule;
  tree.restart_count_ = restart_count;
  tree.pruning_u_ = pruning_u;
  if (tree.epsilon_.size() >= 2 && tree.epsilon_[0] > 0.0) {
    const double ratio = tree.epsilon_[1] / tree.epsilon_[0];
    tree.epsilon_shift_ = std::max(0, static_cast<int>(std::lround(-std::log2(ratio))) - 1);
  }
  tree.index();
  return tree;
}

void ChainingTree::index() {
  children_.assign(nodes_.size(), {});
  int deepest = 0;
  for (const auto& n : nodes_) deepest = std::max(deepest, n.depth);
  levels_.assign(static_cast<std::size_t>(deepest) + 1, {});
  for (const auto& n : nodes_) {
    if (n.parent != kNoNode) children_[n.parent].push_back(n.id);
    levels_[n.depth].push_back(n.id);
  }
  leaf_of_.assign(space_size_, kNoNode);
  for (const auto& n : nodes_) {
    if (n.pruned) continue;
    NodeId& slot = leaf_of_[n.location];
    if (slot == kNoNode || nodes_[slot].depth < n.depth) slot = n.id;
  }
}

const TreeNode& ChainingTree::node(NodeId id) const {
  if (id >= nodes_.size()) throw ArgumentError("node id " + std::to_string(id) + " out of range");
  return nodes_[id];
}

std::span<const NodeId> ChainingTree::children(NodeId id) const {
  if (id >= nodes_.size()) throw ArgumentError("node id " + std::to_string(id) + " out of range");
  return children_[id];
}

std::span<const NodeId> ChainingTree::level(int depth) const {
  if (depth < 0 || depth > max_depth()) throw ArgumentError("depth " + std::to_string(depth) + " out of range");
  return levels_[depth];
}

bool ChainingTree::is_continuation(NodeId id) const {
  const TreeNode& n = node(id);
  if (n.pruned || n.parent == kNoNode) return false;
  const TreeNode& p = nodes_[n.parent];
  return !p.pruned && p.location == n.location;
}

double ChainingTree::epsilon(int depth) const {
  if (depth < 0) throw ArgumentError("negative depth");
  if (static_cast<std::size_t>(depth) < epsilon_.size()) return epsilon_[depth];
  return epsilon_at(diameter(), depth, epsilon_shift_);
}

double ChainingTree::capacity(int depth) const {
  if (depth < 0) throw ArgumentError("negative depth");
  if (static_cast<std::size_t>(depth) < capacity_.size()) return capacity_[depth];
  if (schedule_ == CapacitySchedule::kGeometric || capacity_.empty()) return geometric_capacity(depth);
  return capacity_.back();  // entropy schedule saturates at 2 log |X|
}

std::size_t ChainingTree::pruned_node_count() const {
  return static_cast<std::size_t>(
      std::count_if(nodes_.begin(), nodes_.end(), [](const TreeNode& n) { return n.pruned; }));
}

NodeId ChainingTree::leaf_of(PointId x) const {
  if (x >= space_size_) throw ArgumentError("point id out of range");
  return leaf_of_[x];
}

// ---------------------------------------------------------------------------
// Shared helpers

namespace {

// Radius of every node: max over non-pruned descendants (itself included) of
// the distance to the node's location.
void assign_radii(std::vector<TreeNode>& nodes, const FiniteMetricSpace& space) {
  for (auto& n : nodes) n.radius = 0.0;
  for (const auto& n : nodes) {
    if (n.pruned) continue;
    for (NodeId a = n.parent; a != kNoNode; a = nodes[a].parent) {
      TreeNode& anc = nodes[a];
      anc.radius = std::max(anc.radius, space(n.location, anc.location));
    }
  }
}

std::vector<double> entropy_capacities(const FiniteMetricSpace& space, const std::vector<double>& eps) {
  std::vector<double> cap(eps.size());
  for (std::size_t h = 0; h < eps.size(); ++h) {
    const std::size_t count =
        eps[h] > 0.0 ? greedy_cover(space, eps[h]).centers.size() : space.size();
    cap[h] = 2.0 * std::log(static_cast<double>(count));
  }
  return cap;
}

}  // namespace

// ---------------------------------------------------------------------------
// Forward pass

ChainingTree build_forward(const FiniteMetricSpace& space, CapacitySchedule schedule, int epsilon_shift) {
  const std::size_t n = space.size();
  if (n == 0) throw ArgumentError("cannot build a tree over an empty space");
  if (epsilon_shift < 0) throw ArgumentError("epsilon shift must be non-negative");
  const double diam = space.diameter();

  ChainingTree tree;
  tree.space_size_ = n;
  tree.schedule_ = schedule;
  tree.epsilon_shift_ = epsilon_shift;
  tree.epsilon_.push_back(diam);

  auto& nodes = tree.nodes_;
  nodes.push_back(TreeNode{0, 0, 0, kNoNode, false, 0.0, 0.0});

  std::vector<char> in_tree(n, 0);
  std::vector<double> near_dist(n);
  std::vector<PointId> near_pt(n, 0);
  std::vector<NodeId> node_of(n, kNoNode);  // node at the previous level per point
  in_tree[0] = 1;
  node_of[0] = 0;
  for (PointId p = 0; p < n; ++p) near_dist[p] = space(p, 0);
  std::size_t added = 1;
  std::vector<NodeId> prev_level{0};

  for (int h = 1; added < n; ++h) {
    const double eps_h = epsilon_at(diam, h, epsilon_shift);
    std::vector<PointId> remaining, far;
    for (PointId p = 0; p < n; ++p) {
      if (in_tree[p]) continue;
      remaining.push_back(p);
      if (near_dist[p] > eps_h) far.push_back(p);
    }
    std::vector<PointId> centers;
    if (!far.empty()) {
      centers = greedy_cover(space, eps_h, far).centers;
    } else if (std::all_of(remaining.begin(), remaining.end(), [&](PointId p) { return near_dist[p] == 0.0; })) {
      // Points at distance zero from the tree never leave an eps-ball; they
      // join as separate leaves once nothing else is left.
      centers = remaining;
    }

    std::vector<NodeId> level;
    level.reserve(prev_level.size() + centers.size());
    for (NodeId prev : prev_level) {
      const NodeId id = nodes.size();
      nodes.push_back(TreeNode{id, h, nodes[prev].location, prev, false, 0.0, 0.0});
      level.push_back(id);
    }
    std::vector<NodeId> next_of = node_of;
    for (NodeId id : level) next_of[nodes[id].location] = id;
    for (PointId c : centers) {
      const NodeId id = nodes.size();
      nodes.push_back(TreeNode{id, h, c, node_of[near_pt[c]], false, 0.0, 0.0});
      level.push_back(id);
      next_of[c] = id;
    }
    for (PointId c : centers) in_tree[c] = 1;
    for (PointId p = 0; p < n; ++p) {
      if (in_tree[p]) continue;
      for (PointId c : centers) {
        const double d = space(p, c);
        if (d < near_dist[p] || (d == near_dist[p] && c < near_pt[p])) {
          near_dist[p] = d;
          near_pt[p] = c;
        }
      }
    }
    added += centers.size();
    node_of = std::move(next_of);
    prev_level = std::move(level);
    tree.epsilon_.push_back(eps_h);
  }

  assign_radii(nodes, space);
  const int depth = static_cast<int>(tree.epsilon_.size()) - 1;
  if (schedule == CapacitySchedule::kGeometric) {
    for (int h = 0; h <= depth; ++h) tree.capacity_.push_back(geometric_capacity(h));
  } else {
    tree.capacity_ = entropy_capacities(space, tree.epsilon_);
  }
  tree.index();
  return tree;
}

// ---------------------------------------------------------------------------
// phi

double phi_log_m(double alpha, double delta, double log_m, double u) {
  if (u <= 0.0) throw ArgumentError("phi requires u > 0");
  if (alpha < 0.0 || delta < 0.0) throw ArgumentError("phi requires non-negative alpha and delta");
  const double excess = log_m - std::log(3.0 * u);
  if (!(excess > 0.0)) return 0.0;
  return std::max(0.0, alpha / std::sqrt(2.0) * std::sqrt(excess) - 2.0 * delta);
}

double phi(double alpha, double delta, double m, double u) {
  if (!(m > 0.0)) return 0.0;
  return phi_log_m(alpha, delta, std::log(m), u);
}

int restart_limit(std::size_t space_size) {
  const double n = std::max<double>(static_cast<double>(space_size), 3.0);
  return std::max(0, static_cast<int>(std::ceil(std::log(std::log(n))))) + 1;
}

// ---------------------------------------------------------------------------
// Backward pass

namespace {

class PruneArena {
 public:
  PruneArena(const ChainingTree& tree, const FiniteMetricSpace& space, double u)
      : space_(space), u_(u), nodes_(tree.nodes()), epsilon_(tree.epsilon_schedule()) {
    const std::size_t N = nodes_.size();
    children_.resize(N);
    alive_.assign(N, 1);
    for (const auto& n : nodes_) {
      if (n.parent != kNoNode) children_[n.parent].push_back(n.id);
      depth_ = std::max(depth_, n.depth);
    }
  }

  // n_h - n_{h-1}.
  static double log_capacity(int h) { return geometric_capacity(h) - geometric_capacity(h - 1); }

  // One backward sweep. Returns false when a pruned node overflowed.
  bool sweep() {
    value_.assign(nodes_.size(), 0.0);
    for (int h = depth_; h >= 1; --h) {
      auto at_h = alive_at(h);
      for (NodeId t : at_h) value_[t] = node_value(t);
      const double cap = child_capacity(log_capacity(h));
      for (NodeId s : alive_at(h - 1)) {
        std::vector<NodeId> real;
        for (NodeId c : children_[s]) {
          if (!continues(c)) real.push_back(c);
        }
        if (static_cast<double>(real.size()) <= cap) continue;
        std::sort(real.begin(), real.end(), [&](NodeId a, NodeId b) {
          if (value_[a] != value_[b]) return value_[a] > value_[b];
          return a < b;
        });
        const std::size_t keep = static_cast<std::size_t>(cap) - 1;
        const NodeId pn = nodes_.size();
        nodes_.push_back(TreeNode{pn, h, nodes_[s].location, s, true, 0.0, 0.0});
        children_.emplace_back();
        alive_.push_back(1);
        value_.push_back(0.0);
        for (std::size_t j = keep; j < real.size(); ++j) {
          const NodeId t = real[j];
          if (children_[t].empty()) extend();
          for (NodeId c : children_[t]) {
            nodes_[c].parent = pn;
            children_[pn].push_back(c);
          }
          children_[t].clear();
          alive_[t] = 0;
          std::erase(children_[s], t);
        }
        children_[s].push_back(pn);
        const double next_cap = child_capacity(log_capacity(h + 1));
        if (static_cast<double>(children_[pn].size()) > next_cap) return false;
        value_[pn] = node_value(pn);
      }
    }
    value_[0] = node_value(0);
    return true;
  }

  ChainingTree finish(const ChainingTree& source, int restarts) {
    // Compact: alive nodes ordered by (depth, old id).
    std::vector<NodeId> order;
    for (NodeId i = 0; i < nodes_.size(); ++i) {
      if (alive_[i]) order.push_back(i);
    }
    std::stable_sort(order.begin(), order.end(),
                     [&](NodeId a, NodeId b) { return nodes_[a].depth < nodes_[b].depth; });
    std::vector<NodeId> remap(nodes_.size(), kNoNode);
    for (NodeId i = 0; i < order.size(); ++i) remap[order[i]] = i;
    std::vector<TreeNode> out;
    out.reserve(order.size());
    for (NodeId old : order) {
      TreeNode n = nodes_[old];
      n.id = remap[old];
      n.parent = n.parent == kNoNode ? kNoNode : remap[n.parent];
      n.value = value_[old];
      out.push_back(n);
    }
    assign_radii(out, space_);
    std::vector<double> eps = epsilon_, cap;
    for (int h = static_cast<int>(eps.size()); h <= depth_; ++h) {
      eps.push_back(epsilon_at(source.diameter(), h, source.epsilon_shift()));
    }
    for (int h = 0; h <= depth_; ++h) cap.push_back(geometric_capacity(h));
    return ChainingTree::from_nodes(source.space_size(), std::move(out), std::move(eps), std::move(cap),
                                    CapacitySchedule::kGeometric, restarts, u_);
  }

 private:
  bool continues(NodeId c) const {
    const TreeNode& n = nodes_[c];
    if (n.pruned || n.parent == kNoNode) return false;
    const TreeNode& p = nodes_[n.parent];
    return !p.pruned && p.location == n.location;
  }

  std::vector<NodeId> alive_at(int h) const {
    std::vector<NodeId> out;
    for (NodeId i = 0; i < nodes_.size(); ++i) {
      if (alive_[i] && nodes_[i].depth == h) out.push_back(i);
    }
    return out;
  }

  double subtree_radius(NodeId root) const {
    const PointId loc = nodes_[root].location;
    double r = 0.0;
    std::vector<NodeId> stack(children_[root].begin(), children_[root].end());
    while (!stack.empty()) {
      const NodeId v = stack.back();
      stack.pop_back();
      if (!nodes_[v].pruned) r = std::max(r, space_(loc, nodes_[v].location));
      stack.insert(stack.end(), children_[v].begin(), children_[v].end());
    }
    return r;
  }

  double node_value(NodeId t) const {
    double best = 0.0;
    for (NodeId c : children_[t]) best = std::max(best, value_[c]);
    if (!nodes_[t].pruned) return best;
    const int h = nodes_[t].depth;
    const double delta = subtree_radius(t);
    const double lc = log_capacity(h);
    const double log_m = lc >= kMaxLogCapacity ? lc : std::log(child_capacity(lc));
    const double u_h = u_ + geometric_capacity(h) + h * kLog2;
    return best + phi_log_m(0.5 * delta, delta, log_m, u_h);
  }

  // Adds a level of continuation copies below every leaf at the deepest level.
  void extend() {
    const auto leaves = alive_at(depth_);
    ++depth_;
    for (NodeId leaf : leaves) {
      if (nodes_[leaf].pruned) continue;
      const NodeId id = nodes_.size();
      nodes_.push_back(TreeNode{id, depth_, nodes_[leaf].location, leaf, false, 0.0, 0.0});
      children_.emplace_back();
      alive_.push_back(1);
      value_.push_back(0.0);
      children_[leaf].push_back(id);
    }
  }

  const FiniteMetricSpace& space_;
  double u_;
  std::vector<TreeNode> nodes_;
  std::vector<double> epsilon_;
  std::vector<std::vector<NodeId>> children_;
  std::vector<char> alive_;
  std::vector<double> value_;
  int depth_ = 0;
};

}  // namespace

ChainingTree prune_backward(const ChainingTree& tree, const FiniteMetricSpace& space, double u) {
  if (tree.schedule() != CapacitySchedule::kGeometric) {
    throw ArgumentError("pruning requires the geometric capacity schedule");
  }
  if (!(u > 0.0)) throw ArgumentError("pruning requires u > 0");
  if (space.size() != tree.space_size()) throw ArgumentError("tree and space sizes differ");
  PruneArena arena(tree, space, u);
  const int limit = restart_limit(space.size());
  int restarts = 0;
  while (!arena.sweep()) {
    if (++restarts > limit) {
      throw InternalError("pruning exceeded " + std::to_string(limit) + " restarts");
    }
  }
  return arena.finish(tree, restarts);
}

// ---------------------------------------------------------------------------
// Functionals

std::vector<double> omega_table(const ChainingTree& tree, const FiniteMetricSpace& space, double u, double a,
                                const SmoothnessModel& model, bool majorized) {
  if (tree.size() == 0) throw ArgumentError("empty tree");
  const int H = tree.max_depth();
  std::vector<double> u_level(static_cast<std::size_t>(H) + 1, 0.0);
  for (int i = 1; i <= H; ++i) u_level[i] = confidence_level_u_i(u, tree.capacity(i), i, a);
  std::vector<double> table(static_cast<std::size_t>(H) + 1, 0.0);
  std::vector<double> step(static_cast<std::size_t>(H) + 1);
  for (NodeId id = 0; id < tree.size(); ++id) {
    if (!tree.children(id).empty()) continue;
    const int depth = tree.node(id).depth;
    std::fill(step.begin(), step.end(), 0.0);
    for (NodeId v = id; tree.node(v).parent != kNoNode; v = tree.node(v).parent) {
      const TreeNode& child = tree.node(v);
      const TreeNode& par = tree.node(child.parent);
      const double d = majorized ? par.radius : space(child.location, par.location);
      step[child.depth] = d > 0.0 ? psi_star_inv(model, u_level[child.depth], d) : 0.0;
    }
    double tail = 0.0;
    for (int h = H; h >= 0; --h) {
      if (h < depth) tail += step[h + 1];
      table[h] = std::max(table[h], tail);
    }
  }
  return table;
}

double omega(const ChainingTree& tree, const FiniteMetricSpace& space, int depth, double u, double a,
             const SmoothnessModel& model, bool majorized) {
  if (depth < 0) throw ArgumentError("negative depth");
  const auto table = omega_table(tree, space, u, a, model, majorized);
  return depth < static_cast<int>(table.size()) ? table[depth] : 0.0;
}

double lower_value(const ChainingTree& tree, NodeId node) { return tree.node(node).value; }

double lower_bound_functional(const ChainingTree& tree, NodeId node) {
  const TreeNode& s = tree.node(node);
  double best = 0.0;
  for (NodeId c : tree.children(node)) best = std::max(best, lower_bound_functional(tree, c));
  return s.radius * std::exp2(0.5 * s.depth) + best;
}

NodeId parent_at_depth(const ChainingTree& tree, NodeId x, int depth) {
  NodeId v = x;
  while (tree.node(v).depth > depth) v = tree.node(v).parent;
  return v;
}

// ---------------------------------------------------------------------------
// Validation

TreeValidation validate_tree(const ChainingTree& tree, const FiniteMetricSpace& space) {
  TreeValidation report;
  auto fail = [&](std::string msg) { report.failures.push_back(std::move(msg)); };
  if (tree.size() == 0) {
    fail("tree is empty");
    return report;
  }
  if (tree.space_size() != space.size()) {
    fail("tree built over " + std::to_string(tree.space_size()) + " points, space has " +
         std::to_string(space.size()));
    return report;
  }
  const auto& nodes = tree.nodes();
  const int H = tree.max_depth();
  const double slack = 1e-12 * std::max(1.0, space.diameter());

  if (tree.level(0).size() != 1) fail("depth 0 must hold exactly the root");
  for (const auto& n : nodes) {
    if (n.parent == kNoNode) continue;
    const TreeNode& p = nodes[n.parent];
    if (p.depth != n.depth - 1) {
      fail("node " + std::to_string(n.id) + " at depth " + std::to_string(n.depth) + " has parent at depth " +
           std::to_string(p.depth));
    }
    if (!n.pruned && !p.pruned) {
      const double d = space(n.location, p.location);
      if (d > tree.epsilon(n.depth - 1) + slack) {
        fail("node " + std::to_string(n.id) + " is " + fmt(d) + " from its parent, above eps_" +
             std::to_string(n.depth - 1) + " = " + fmt(tree.epsilon(n.depth - 1)));
      }
    }
  }

  for (int h = 0; h <= H; ++h) {
    std::vector<PointId> locs;
    for (NodeId id : tree.level(h)) {
      if (!nodes[id].pruned) locs.push_back(nodes[id].location);
    }
    const double eps = tree.epsilon(h);
    for (std::size_t i = 0; i < locs.size(); ++i) {
      for (std::size_t j = i + 1; j < locs.size(); ++j) {
        if (locs[i] == locs[j]) {
          fail("point " + std::to_string(locs[i]) + " appears twice at depth " + std::to_string(h));
          continue;
        }
        const double d = space(locs[i], locs[j]);
        if (d > 0.0 && d < eps - slack) {
          fail("points " + std::to_string(locs[i]) + " and " + std::to_string(locs[j]) + " at depth " +
               std::to_string(h) + " are " + fmt(d) + " apart, below eps = " + fmt(eps));
        }
      }
    }
    const double size = static_cast<double>(locs.size());
    if (std::log(size) > tree.capacity(h) + 1e-9) {
      report.capacity_warnings.push_back("level " + std::to_string(h) + " holds " + std::to_string(locs.size()) +
                                         " points, above e^{n_h} with n_h = " + fmt(tree.capacity(h)));
    }
  }

  if (tree.is_pruned_tree()) {
    for (int h = 1; h <= H; ++h) {
      const double lc = tree.capacity(h) - tree.capacity(h - 1);
      const double cap = lc >= kMaxLogCapacity ? std::exp(kMaxLogCapacity) : std::floor(std::exp(lc) + 1e-9);
      for (NodeId s : tree.level(h - 1)) {
        std::size_t real = 0;
        for (NodeId c : tree.children(s)) real += tree.is_continuation(c) ? 0 : 1;
        if (static_cast<double>(real) > cap) {
          fail("node " + std::to_string(s) + " has " + std::to_string(real) + " children, capacity " + fmt(cap));
        }
      }
    }
    if (tree.restart_count() > restart_limit(space.size())) {
      fail("restart count " + std::to_string(tree.restart_count()) + " exceeds " +
           std::to_string(restart_limit(space.size())));
    }
  }

  std::vector<int> seen(space.size(), 0);
  for (const auto& n : nodes) {
    if (!tree.children(n.id).empty()) continue;
    if (n.depth != H) fail("leaf " + std::to_string(n.id) + " is not at the deepest level");
    if (n.pruned) {
      fail("pruned node " + std::to_string(n.id) + " is a leaf");
      continue;
    }
    ++seen[n.location];
  }
  for (PointId x = 0; x < space.size(); ++x) {
    if (seen[x] != 1) fail("point " + std::to_string(x) + " has " + std::to_string(seen[x]) + " leaves");
  }

  // Radii never grow along a root-to-leaf path of non-pruned nodes.
  for (const auto& n : nodes) {
    if (n.pruned) continue;
    NodeId a = n.parent;
    while (a != kNoNode && nodes[a].pruned) a = nodes[a].parent;
    if (a != kNoNode && n.radius > nodes[a].radius + slack) {
      fail("radius of node " + std::to_string(n.id) + " (" + fmt(n.radius) + ") exceeds its ancestor " +
           std::to_string(a) + " (" + fmt(nodes[a].radius) + ")");
    }
  }
  return report;
}

}  // namespace chainbandit
