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

#include "chainbandit/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>

#include "chainbandit/errors.hpp"
#include "chainbandit/gp.hpp"
#include "chainbandit/io.hpp"
#include "chainbandit/parallel.hpp"

namespace chainbandit {
namespace fs = std::filesystem;

namespace {

constexpr std::size_t kMaxGeneratedPoints = 1'000'000;
constexpr double kLog2 = 0.69314718055994530942;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

struct Call {
  std::string name;
  std::vector<double> args;
};

std::optional<Call> parse_call(const std::string& text) {
  const std::string t = trim(text);
  const auto open = t.find('(');
  if (open == std::string::npos || t.back() != ')') return std::nullopt;
  Call c;
  c.name = trim(t.substr(0, open));
  if (c.name.empty() || !std::all_of(c.name.begin(), c.name.end(), [](char ch) { return std::isalpha(ch) || ch == '-' || ch == '_'; })) {
    return std::nullopt;
  }
  std::stringstream body(t.substr(open + 1, t.size() - open - 2));
  for (std::string tok; std::getline(body, tok, ',');) {
    tok = trim(tok);
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(tok, &used);
    } catch (const std::exception&) {
      throw ArgumentError("bad generator argument '" + tok + "' in " + t);
    }
    if (used != tok.size()) throw ArgumentError("bad generator argument '" + tok + "' in " + t);
    c.args.push_back(v);
  }
  return c;
}

std::size_t as_count(double v, const char* what) {
  if (!(v >= 1.0) || v != std::floor(v) || v > 1e7) {
    throw ArgumentError(std::string(what) + " must be a positive integer");
  }
  return static_cast<std::size_t>(v);
}

PointCloud box_grid(std::size_t dim, std::size_t per_dim, const std::vector<double>& lo,
                    const std::vector<double>& hi) {
  double total = std::pow(static_cast<double>(per_dim), static_cast<double>(dim));
  if (total > static_cast<double>(kMaxGeneratedPoints)) throw ArgumentError("generator would create too many points");
  PointCloud cloud(dim, {});
  std::vector<std::size_t> idx(dim, 0);
  std::vector<double> p(dim);
  for (std::size_t k = 0; k < static_cast<std::size_t>(total); ++k) {
    for (std::size_t d = 0; d < dim; ++d) {
      p[d] = per_dim == 1 ? lo[d] : lo[d] + (hi[d] - lo[d]) * static_cast<double>(idx[d]) / (per_dim - 1.0);
    }
    cloud.push_back(p);
    for (std::size_t d = dim; d-- > 0;) {
      if (++idx[d] < per_dim) break;
      idx[d] = 0;
    }
  }
  return cloud;
}

}  // namespace

// ---------------------------------------------------------------------------
// Spaces

bool is_generator_expression(const std::string& text) {
  try {
    return parse_call(text).has_value();
  } catch (const ArgumentError&) {
    return true;  // looks like a call, arguments are bad
  }
}

PointCloud generate_points(const std::string& expression) {
  const auto call = parse_call(expression);
  if (!call) throw ArgumentError("not a generator expression: " + expression);
  const auto& a = call->args;
  if (call->name == "grid") {
    if (a.size() != 3) throw ArgumentError("grid(D, n_per_dim, extent) takes 3 arguments");
    const std::size_t dim = as_count(a[0], "grid dimension");
    const std::size_t per = as_count(a[1], "grid n_per_dim");
    if (!(a[2] > 0.0)) throw ArgumentError("grid extent must be positive");
    return box_grid(dim, per, std::vector<double>(dim, 0.0), std::vector<double>(dim, a[2]));
  }
  if (call->name == "line") {
    if (a.size() != 1) throw ArgumentError("line(n) takes 1 argument");
    const std::size_t n = as_count(a[0], "line n");
    return box_grid(1, n, {0.0}, {static_cast<double>(n - 1)});
  }
  if (call->name == "star") {
    if (a.size() != 1) throw ArgumentError("star(n) takes 1 argument");
    const std::size_t n = as_count(a[0], "star n");
    if (static_cast<double>(n) * n > kMaxGeneratedPoints * 16.0) throw ArgumentError("star too large");
    PointCloud cloud(n, {});
    std::vector<double> p(n, 0.0);
    cloud.push_back(p);
    for (std::size_t i = 0; i < n; ++i) {
      std::fill(p.begin(), p.end(), 0.0);
      p[i] = 1.0 / std::sqrt(2.0);
      cloud.push_back(p);
    }
    return cloud;
  }
  if (call->name == "ellipsoid" || call->name == "truncated-ellipsoid") {
    if (a.size() < 3) throw ArgumentError("ellipsoid(D, n_per_dim, a_1, ..., a_D) needs the semi-axes");
    const std::size_t dim = as_count(a[0], "ellipsoid dimension");
    const std::size_t per = as_count(a[1], "ellipsoid n_per_dim");
    if (a.size() != dim + 2) throw ArgumentError("ellipsoid needs exactly D semi-axes");
    std::vector<double> axes(a.begin() + 2, a.end()), lo(dim), hi(dim);
    for (std::size_t d = 0; d < dim; ++d) {
      if (!(axes[d] > 0.0)) throw ArgumentError("semi-axes must be positive");
      lo[d] = -axes[d];
      hi[d] = axes[d];
    }
    const PointCloud box = box_grid(dim, per, lo, hi);
    PointCloud cloud(dim, {});
    for (std::size_t i = 0; i < box.size(); ++i) {
      double s = 0.0;
      for (std::size_t d = 0; d < dim; ++d) s += (box[i][d] / axes[d]) * (box[i][d] / axes[d]);
      if (s <= 1.0 + 1e-12) cloud.push_back(box[i]);
    }
    if (cloud.size() == 0) throw ArgumentError("ellipsoid grid is empty");
    return cloud;
  }
  throw ArgumentError("unknown generator '" + call->name + "' (grid, line, star, ellipsoid)");
}

ResolvedSpace resolve_space(const std::string& source, const DistanceRule& rule) {
  ResolvedSpace out;
  if (is_generator_expression(source)) {
    out.cloud = generate_points(source);
  } else if (is_point_cloud_file(source)) {
    out.cloud = load_point_cloud(source);
  } else {
    out.space = load_distance_matrix(source);
    return out;
  }
  out.space = FiniteMetricSpace::from_points(*out.cloud, rule);
  return out;
}

ResolvedSpace resolve_space(const std::string& source, const std::optional<Kernel>& kernel) {
  return resolve_space(source, kernel ? kernel_canonical_rule(*kernel) : euclidean_rule());
}

// ---------------------------------------------------------------------------
// Config

OptimizerConfig ExperimentConfig::optimizer() const {
  OptimizerConfig c;
  c.u = u;
  c.a = a;
  c.eta2 = eta2;
  c.t_max = t_max;
  c.depth_rule = depth_rule;
  c.schedule = schedule;
  c.seed = seed;
  return c;
}

void ExperimentConfig::validate() const {
  if (!(u > 0.0)) throw ConfigError("u must be positive");
  if (!(a > 1.0)) throw ConfigError("a must exceed 1");
  if (!(eta2 > 0.0)) throw ConfigError("eta2 must be positive");
  if (replicates < 1) throw ConfigError("replicates must be at least 1");
  if (channels < 1) throw ConfigError("channels must be at least 1");
  if (draws < 1) throw ConfigError("draws must be at least 1");
  if (objective == Objective::kSquaredGp && !kernel.stationary()) {
    throw ConfigError("squared_gp objective needs a stationary kernel");
  }
  if (space.empty()) throw ConfigError("space must be set");
  if (!is_generator_expression(space) && !fs::exists(space)) {
    throw ConfigError("space file '" + space + "' does not exist");
  }
}

ExperimentConfig parse_config_text(const std::string& text) {
  ExperimentConfig cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  std::map<std::string, int> seen;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    const std::string t = trim(hash == std::string::npos ? line : line.substr(0, hash));
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) throw ParseError("expected 'key = value'", lineno);
    const std::string key = trim(t.substr(0, eq));
    const std::string val = trim(t.substr(eq + 1));
    if (val.empty()) throw ParseError("missing value for '" + key + "'", lineno);
    if (seen.count(key)) throw ParseError("duplicate key '" + key + "'", lineno);
    seen[key] = lineno;
    auto real = [&] {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(val, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != val.size() || used == 0) throw ParseError("'" + key + "' expects a number, got '" + val + "'", lineno);
      return v;
    };
    auto count = [&] {
      const double v = real();
      if (v < 0.0 || v != std::floor(v)) throw ParseError("'" + key + "' expects a non-negative integer", lineno);
      return static_cast<std::size_t>(v);
    };
    try {
      if (key == "space" || key == "space_file") cfg.space = val;
      else if (key == "kernel") cfg.kernel = parse_kernel(val);
      else if (key == "objective") {
        if (val == "gp") cfg.objective = Objective::kGp;
        else if (val == "squared_gp") cfg.objective = Objective::kSquaredGp;
        else throw ParseError("objective must be gp or squared_gp", lineno);
      } else if (key == "channels") cfg.channels = static_cast<int>(count());
      else if (key == "u") cfg.u = real();
      else if (key == "a") cfg.a = real();
      else if (key == "eta2") cfg.eta2 = real();
      else if (key == "t_max") cfg.t_max = count();
      else if (key == "replicates") cfg.replicates = count();
      else if (key == "draws") cfg.draws = count();
      else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(count());
      else if (key == "output_dir") cfg.output_dir = val;
      else if (key == "depth_rule") cfg.depth_rule = parse_depth_rule(val);
      else if (key == "schedule") cfg.schedule = parse_schedule(val);
      else throw ParseError("unknown key '" + key + "'", lineno);
    } catch (const ArgumentError& e) {
      throw ParseError(e.what(), lineno);
    }
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

// ---------------------------------------------------------------------------
// Reports

const char* direction_name(Direction d) {
  switch (d) {
    case Direction::kAtMost: return "at_most";
    case Direction::kAtLeast: return "at_least";
    case Direction::kMatch: return "match";
    case Direction::kBelow: return "below";
    case Direction::kAbove: return "above";
  }
  return "?";
}

double binomial_std_error(double p, std::size_t n) {
  if (n == 0) return 0.0;
  return std::sqrt(std::max(0.0, p * (1.0 - p)) / static_cast<double>(n));
}

ValidationRow finalize(ValidationRow row) {
  switch (row.direction) {
    case Direction::kAtMost:
      if (row.std_error == 0.0) row.std_error = binomial_std_error(row.rate, row.trials);
      row.pass = row.rate <= row.bound + 3.0 * row.std_error;
      break;
    case Direction::kAtLeast:
      if (row.std_error == 0.0) row.std_error = binomial_std_error(row.rate, row.trials);
      row.pass = row.rate >= row.bound - 3.0 * row.std_error;
      break;
    case Direction::kMatch:
      if (row.std_error == 0.0) row.std_error = binomial_std_error(row.bound, row.trials);
      row.pass = std::abs(row.rate - row.bound) <= 3.0 * row.std_error;
      break;
    case Direction::kBelow: row.pass = row.rate < row.bound; break;
    case Direction::kAbove: row.pass = row.rate > row.bound; break;
  }
  return row;
}

double quantile(std::vector<double> values, double q) {
  if (values.empty()) throw ArgumentError("quantile of an empty sample");
  if (!(q >= 0.0 && q <= 1.0)) throw ArgumentError("quantile level must lie in [0, 1]");
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

bool ValidationReport::all_pass() const {
  return std::all_of(rows.begin(), rows.end(), [](const ValidationRow& r) { return r.pass; });
}

const ValidationRow& ValidationReport::row(const std::string& claim) const {
  for (const auto& r : rows) {
    if (r.claim == claim) return r;
  }
  throw ArgumentError("no report row '" + claim + "'");
}

void write_validation_report(std::ostream& out, const ValidationReport& report) {
  out << "claim,trials,violations,rate,bound,std_error,direction,pass,note\n";
  for (const auto& r : report.rows) {
    std::string note = r.note;
    std::replace(note.begin(), note.end(), ',', ';');
    out << r.claim << ',' << r.trials << ',' << r.violations << ',' << format_real(r.rate) << ','
        << format_real(r.bound) << ',' << format_real(r.std_error) << ',' << direction_name(r.direction) << ','
        << (r.pass ? "pass" : "fail") << ',' << note << '\n';
  }
}

// ---------------------------------------------------------------------------
// Chaining suites

namespace {

ValidationRow make_row(std::string claim, std::size_t trials, std::size_t violations, double rate, double bound) {
  ValidationRow row;
  row.claim = std::move(claim);
  row.trials = trials;
  row.violations = violations;
  row.rate = rate;
  row.bound = bound;
  return row;
}

struct GpSetup {
  PointCloud cloud;
  FiniteMetricSpace space;
  Eigen::MatrixXd cov;
};

GpSetup gp_setup(const ExperimentConfig& config, const DistanceRule& rule) {
  ResolvedSpace rs = resolve_space(config.space, rule);
  if (!rs.cloud) throw ArgumentError("Gaussian process runs need point coordinates, not a distance matrix");
  GpSetup s{*rs.cloud, std::move(rs.space), {}};
  s.cov = gram_matrix(config.kernel, s.cloud);
  return s;
}

// Nodes ordered deepest first, so children precede parents.
std::vector<NodeId> bottom_up_order(const ChainingTree& tree) {
  std::vector<NodeId> order(tree.size());
  std::iota(order.begin(), order.end(), NodeId{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](NodeId a, NodeId b) { return tree.node(a).depth > tree.node(b).depth; });
  return order;
}

// sup over the points below each node of f.
void sup_below(const ChainingTree& tree, const std::vector<NodeId>& order, const Eigen::VectorXd& f,
               std::vector<double>& out) {
  out.assign(tree.size(), -std::numeric_limits<double>::infinity());
  for (NodeId id : order) {
    const TreeNode& n = tree.node(id);
    double v = out[id];
    if (!n.pruned && tree.children(id).empty()) v = f[static_cast<Eigen::Index>(n.location)];
    for (NodeId c : tree.children(id)) v = std::max(v, out[c]);
    out[id] = v;
  }
}

std::string depth_claim(const char* prefix, int h) { return std::string(prefix) + std::to_string(h); }

}  // namespace

ValidationReport validate_upper(const ExperimentConfig& config) {
  config.validate();
  const GpSetup s = gp_setup(config, kernel_canonical_rule(config.kernel));
  if (s.space.size() > kUpperSpaceLimit) {
    throw CapacityError("upper-bound validation is limited to " + std::to_string(kUpperSpaceLimit) + " points");
  }
  const ChainingTree tree = build_search_tree(s.space, config.schedule, config.u);
  const auto omega = omega_table(tree, s.space, config.u, config.a, SmoothnessModel::gaussian());
  const auto tv = validate_tree(tree, s.space);
  const PriorSampler sampler(s.cov);
  const auto order = bottom_up_order(tree);
  const int H = tree.max_depth();
  const std::size_t trials = config.replicates;

  // per replicate: bit h set when depth h is violated
  std::vector<std::vector<char>> bad(trials, std::vector<char>(static_cast<std::size_t>(H) + 1, 0));
  parallel_for(trials, [&](std::size_t r) {
    Rng rng = make_stream(config.seed + r, 0);
    const Eigen::VectorXd f = sampler.draw(rng);
    std::vector<double> sup;
    sup_below(tree, order, f, sup);
    for (const auto& n : tree.nodes()) {
      if (sup[n.id] - f[static_cast<Eigen::Index>(n.location)] > omega[n.depth]) bad[r][n.depth] = 1;
    }
  });

  ValidationReport report;
  const double bound = std::exp(-config.u);
  std::size_t joint = 0;
  for (const auto& b : bad) joint += std::any_of(b.begin(), b.end(), [](char c) { return c != 0; }) ? 1 : 0;
  ValidationRow row = make_row("upper_joint", trials, joint, static_cast<double>(joint) / trials, bound);
  row.note = std::string("schedule=") + schedule_name(tree.schedule()) + " depth=" + std::to_string(H) +
             (tv.capacity_warnings.empty() ? "" : " level-size warnings=" + std::to_string(tv.capacity_warnings.size()));
  report.rows.push_back(finalize(row));
  for (int h = 0; h <= H; ++h) {
    std::size_t v = 0;
    for (const auto& b : bad) v += b[h];
    ValidationRow dr = make_row(depth_claim("upper_depth_", h), trials, v, static_cast<double>(v) / trials, bound);
    dr.note = "omega=" + format_real(omega[h]);
    report.rows.push_back(finalize(dr));
  }
  return report;
}

ValidationReport validate_lower(const ExperimentConfig& config) {
  config.validate();
  const GpSetup s = gp_setup(config, kernel_canonical_rule(config.kernel));
  const ChainingTree tree = prune_backward(build_forward(s.space, CapacitySchedule::kGeometric), s.space, config.u);
  const PriorSampler sampler(s.cov);
  const auto order = bottom_up_order(tree);
  const int H = tree.max_depth();
  const std::size_t trials = config.replicates;
  const double functional = lower_bound_functional(tree, tree.root());

  std::vector<int> pruned_depths;
  for (int h = 0; h <= H; ++h) {
    for (NodeId id : tree.level(h)) {
      if (tree.node(id).pruned) {
        pruned_depths.push_back(h);
        break;
      }
    }
  }

  std::vector<std::vector<char>> bad(trials, std::vector<char>(static_cast<std::size_t>(H) + 1, 0));
  std::vector<double> ratio(trials, 0.0);
  parallel_for(trials, [&](std::size_t r) {
    Rng rng = make_stream(config.seed + r, 0);
    const Eigen::VectorXd f = sampler.draw(rng);
    std::vector<double> sup;
    sup_below(tree, order, f, sup);
    for (const auto& n : tree.nodes()) {
      if (n.value > 0.0 && sup[n.id] - f[static_cast<Eigen::Index>(n.location)] < n.value) bad[r][n.depth] = 1;
    }
    const double root_gap = sup[tree.root()] - f[static_cast<Eigen::Index>(tree.node(tree.root()).location)];
    ratio[r] = functional > 0.0 ? root_gap / functional : 0.0;
  });

  ValidationReport report;
  if (pruned_depths.empty()) {
    ValidationRow row = make_row("lower_no_pruned_nodes", trials, 0, 0.0, 0.0);
    row.note = "vacuous: every V is 0";
    report.rows.push_back(finalize(row));
  }
  for (int h : pruned_depths) {
    std::size_t v = 0;
    bool any_value = false;
    for (NodeId id : tree.level(h)) any_value = any_value || tree.node(id).value > 0.0;
    for (const auto& b : bad) v += b[h];
    const double u_h = config.u + tree.capacity(h) + h * kLog2;
    ValidationRow row = make_row(depth_claim("lower_depth_", h), trials, v, static_cast<double>(v) / trials, std::exp(-u_h));
    row.note = any_value ? "u_h=" + format_real(u_h) : "vacuous: V = 0 at this depth";
    report.rows.push_back(finalize(row));
  }
  if (functional > 0.0) {
    for (double q : {0.05, 0.25, 0.5, 0.75, 0.95}) report.ratio_quantiles.push_back(quantile(ratio, q));
    ValidationRow row = make_row("cu_ratio_q05", trials, 0, report.ratio_quantiles[0], 0.0);
    row.direction = Direction::kAbove;
    row.note = "quantiles 5/25/50/75/95%: " + format_real(report.ratio_quantiles[0]) + " " +
               format_real(report.ratio_quantiles[1]) + " " + format_real(report.ratio_quantiles[2]) + " " +
               format_real(report.ratio_quantiles[3]) + " " + format_real(report.ratio_quantiles[4]) +
               "; functional=" + format_real(functional);
    report.rows.push_back(finalize(row));
  }
  return report;
}

// ---------------------------------------------------------------------------
// Tail and anti-concentration suite

double squared_gaussian_miss_probability(double mu, double sigma, double lower, double upper) {
  if (!(sigma > 0.0)) throw ArgumentError("sigma must be positive");
  auto cdf = [&](double x) { return 0.5 * std::erfc(-(x - mu) / (sigma * std::sqrt(2.0))); };
  auto sf = [&](double x) { return 0.5 * std::erfc((x - mu) / (sigma * std::sqrt(2.0))); };
  // |X| <= l or |X| >= u
  const double inner = lower > 0.0 ? cdf(lower) - cdf(-lower) : 0.0;
  return inner + sf(upper) + cdf(-upper);
}

namespace {

struct Task {
  ValidationRow row;
  std::function<std::size_t(Rng&)> count;  // successes or violations
  std::uint64_t stream = 0;
};

}  // namespace

ValidationReport validate_lemmas(const ExperimentConfig& config) {
  config.validate();
  const std::size_t n1 = config.draws;
  const std::size_t n3 = std::max<std::size_t>(1000, config.draws / 10);
  const std::size_t n5 = std::max<std::size_t>(1000, config.draws / 100);
  std::vector<Task> tasks;
  std::uint64_t stream = 100;

  for (double mu : {0.0, 1.0, 3.0}) {
    for (double sigma : {0.5, 1.0, 2.0}) {
      for (double s : {1.0, 2.0}) {
        const Interval iv = squared_gaussian_interval(mu, sigma, s);
        const std::string tag = "mu=" + format_real(mu) + "_sigma=" + format_real(sigma) + "_s=" + format_real(s);
        auto misses = [=](Rng& rng, std::size_t n) {
          std::normal_distribution<double> g(mu, sigma);
          std::size_t bad = 0;
          const double l2 = iv.lower * iv.lower, u2 = iv.upper * iv.upper;
          for (std::size_t k = 0; k < n; ++k) {
            const double x = g(rng);
            const double x2 = x * x;
            bad += (x2 <= l2 || x2 >= u2) ? 1 : 0;
          }
          return bad;
        };
        Task t;
        t.row = make_row("sqgauss_tail_" + tag, n1, 0, 0.0, std::exp(-s * s));
        t.row.note = "l=" + format_real(iv.lower) + " u=" + format_real(iv.upper);
        t.count = [=](Rng& rng) { return misses(rng, n1); };
        t.stream = stream++;
        tasks.push_back(t);
        Task e;
        e.row = make_row("sqgauss_exact_" + tag, n1, 0, 0.0,
                 squared_gaussian_miss_probability(mu, sigma, iv.lower, iv.upper));
        e.row.direction = Direction::kMatch;
        e.row.note = "erf probability vs Monte Carlo";
        e.count = [=](Rng& rng) { return misses(rng, n1); };
        e.stream = stream++;
        tasks.push_back(e);
      }
    }
  }

  struct L3 {
    std::size_t m;
    double u;
  };
  for (const L3 c : {L3{26, 1.0}, L3{260, 10.0}, L3{26, 10.0}}) {
    const double ratio = static_cast<double>(c.m) / (2.6 * c.u);
    const double threshold = std::sqrt(std::max(0.0, std::log(ratio)));
    Task t;
    t.row = make_row("gauss_max_m=" + std::to_string(c.m) + "_u=" + format_real(c.u), n3, 0, 0.0, 1.0 - std::exp(-c.u));
    t.row.direction = Direction::kAtLeast;
    t.row.note = "threshold=" + format_real(threshold);
    t.count = [=](Rng& rng) {
      std::normal_distribution<double> g;
      std::size_t hits = 0;
      for (std::size_t k = 0; k < n3; ++k) {
        double best = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < c.m; ++i) best = std::max(best, g(rng));
        hits += best >= threshold ? 1 : 0;
      }
      return hits;
    };
    t.stream = stream++;
    tasks.push_back(t);
  }

  // Packed sets: f(s) = 0 and f(t_i) = sqrt(rho) Z_0 + sqrt(1 - rho) Z_i, so
  // d(t_i, s) = 1 and d(t_i, t_j) = sqrt(2 (1 - rho)).
  struct L5 {
    const char* name;
    std::size_t m;
    double rho;
    double u;
  };
  for (const L5 c : {L5{"iid", 500, 0.0, 1.0}, L5{"equicorrelated", 10000, 0.5, 1.0}, L5{"small_m", 3, 0.0, 1.0}}) {
    const double alpha = std::sqrt(2.0 * (1.0 - c.rho));
    const double delta = 1.0;
    const double threshold = phi(alpha, delta, static_cast<double>(c.m), c.u);
    Task t;
    t.row = make_row(std::string("packed_max_") + c.name + "_m=" + std::to_string(c.m), n5, 0, 0.0, 1.0 - std::exp(-c.u));
    t.row.direction = Direction::kAtLeast;
    t.row.note = "phi=" + format_real(threshold) + " alpha=" + format_real(alpha) + " delta=1";
    if (threshold <= 0.0) {
      t.row.trials = 0;
      t.row.note += "; vacuous pass (phi = 0)";
    } else {
      t.count = [=](Rng& rng) {
        std::normal_distribution<double> g;
        const double a = std::sqrt(c.rho), b = std::sqrt(1.0 - c.rho);
        std::size_t hits = 0;
        for (std::size_t k = 0; k < n5; ++k) {
          const double common = a * g(rng);
          double best = -std::numeric_limits<double>::infinity();
          for (std::size_t i = 0; i < c.m; ++i) best = std::max(best, common + b * g(rng));
          hits += best >= threshold ? 1 : 0;
        }
        return hits;
      };
    }
    t.stream = stream++;
    tasks.push_back(t);
  }

  for (int N : {1, 4}) {
    const double mu = 1.0, sigma = 0.5, u = 2.0;
    const Interval iv = squared_gp_bounds(mu, sigma, u, N);
    Task t;
    t.row = make_row("sqgp_interval_N=" + std::to_string(N), n3, 0, 0.0, 1.0 - std::exp(-u));
    t.row.direction = Direction::kAtLeast;
    t.row.note = "mu=1 sigma=0.5 u=2";
    t.count = [=](Rng& rng) {
      std::normal_distribution<double> g(mu, sigma);
      std::size_t hits = 0;
      for (std::size_t k = 0; k < n3; ++k) {
        bool all = true;
        for (int j = 0; j < N; ++j) {
          const double x = g(rng);
          all = all && x * x >= iv.lower && x * x <= iv.upper;
        }
        hits += all ? 1 : 0;
      }
      return hits;
    };
    t.stream = stream++;
    tasks.push_back(t);
  }

  parallel_for(tasks.size(), [&](std::size_t k) {
    Task& t = tasks[k];
    if (!t.count) return;
    Rng rng = make_stream(config.seed, t.stream);
    const std::size_t c = t.count(rng);
    const bool counts_successes = t.row.direction == Direction::kAtLeast;
    t.row.violations = counts_successes ? t.row.trials - c : c;
    t.row.rate = static_cast<double>(c) / static_cast<double>(t.row.trials);
  });

  ValidationReport report;
  for (auto& t : tasks) {
    if (t.row.trials == 0) {
      t.row.pass = true;
      report.rows.push_back(t.row);
    } else {
      report.rows.push_back(finalize(t.row));
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Experiments

namespace {

// Removes everything written so far unless released.
class OutputGuard {
 public:
  explicit OutputGuard(const std::string& dir) : dir_(dir) {
    if (!fs::exists(dir_)) {
      std::error_code ec;
      fs::create_directories(dir_, ec);
      if (ec) throw IoError("cannot create output directory '" + dir + "': " + ec.message());
      created_dir_ = true;
    }
  }
  ~OutputGuard() {
    if (released_) return;
    std::error_code ec;
    for (const auto& f : files_) fs::remove(f, ec);
    if (created_dir_) fs::remove(dir_, ec);
  }
  std::ofstream open(const std::string& name) {
    const std::string path = (fs::path(dir_) / name).string();
    files_.push_back(path);
    return open_output(path);
  }
  void release() { released_ = true; }
  const std::vector<std::string>& files() const { return files_; }

 private:
  std::string dir_;
  std::vector<std::string> files_;
  bool created_dir_ = false;
  bool released_ = false;
};

void check_stream(std::ofstream& out, const std::string& what) {
  out.flush();
  if (!out) throw IoError("failed writing " + what);
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& config) {
  config.validate();
  const bool squared = config.objective == Objective::kSquaredGp;
  const DistanceRule rule = squared ? squared_gp_rule(config.kernel) : kernel_canonical_rule(config.kernel);
  const SmoothnessModel model =
      squared ? SmoothnessModel::squared_gp(config.channels, config.kernel.variance) : SmoothnessModel::gaussian();
  const GpSetup s = gp_setup(config, rule);
  const ChainingTree tree = build_search_tree(s.space, config.schedule, config.u);
  const auto omega = omega_table(tree, s.space, config.u, config.a, model);
  const PriorSampler sampler(s.cov);
  const std::size_t R = config.replicates;

  std::vector<RegretRecord> records(R);
  std::vector<RegretBound> bounds(R);
  parallel_for(R, [&](std::size_t r) {
    Rng rng = make_stream(config.seed + r, 0);
    OptimizerConfig oc = config.optimizer();
    oc.seed = config.seed + r;
    if (squared) {
      std::vector<std::vector<double>> truth;
      for (int j = 0; j < config.channels; ++j) {
        const Eigen::VectorXd g = sampler.draw(rng);
        truth.emplace_back(g.data(), g.data() + g.size());
      }
      records[r] = run_squared_gp_ucb(s.cov, tree, omega, oc, truth);
    } else {
      const Eigen::VectorXd f = sampler.draw(rng);
      const std::vector<double> truth(f.data(), f.data() + f.size());
      records[r] = run_gp_ucb(s.cov, tree, omega, oc, truth);
    }
    bounds[r] = regret_bound_rhs(records[r], s.cov, oc);
  });

  ExperimentResult result;
  std::size_t over = 0, uncovered = 0, regret_bad = 0, info_bad = 0;
  const double ce = c_eta(config.eta2);
  for (std::size_t r = 0; r < R; ++r) {
    const auto& rec = records[r];
    over += regret_within_bound(rec, bounds[r]) ? 0 : 1;
    bool covered = true, consistent = true;
    double sum_var = 0.0;
    for (std::size_t k = 0; k < rec.rows.size(); ++k) {
      const auto& row = rec.rows[k];
      covered = covered && row.covered;
      sum_var += row.prior_variance;
      if (row.simple_regret > row.cum_regret / static_cast<double>(k + 1) + 1e-12) consistent = false;
      if (k > 0 && row.simple_regret > rec.rows[k - 1].simple_regret) consistent = false;
      if (!std::isfinite(row.cum_regret)) consistent = false;
    }
    uncovered += covered ? 0 : 1;
    regret_bad += consistent ? 0 : 1;
    if (!squared && !rec.rows.empty() && sum_var > ce * bounds[r].info_gain.back() + 1e-9) ++info_bad;
  }
  auto& rows = result.report.rows;
  {
    ValidationRow row = make_row("regret_bound", R, over, static_cast<double>(R - over) / R, 1.0 - 2.0 * std::exp(-config.u));
    row.direction = Direction::kAtLeast;
    row.note = "fraction of runs with R_t <= chaining bound at every t";
    rows.push_back(finalize(row));
  }
  {
    ValidationRow row = make_row("interval_coverage", R, uncovered, static_cast<double>(R - uncovered) / R,
                      1.0 - std::exp(-config.u));
    row.direction = Direction::kAtLeast;
    row.note = squared ? "g_j^2 inside every channel interval at every query" : "f inside [L_i, U_i] at every query";
    rows.push_back(finalize(row));
  }
  {
    ValidationRow row = make_row("simple_regret_consistency", R, regret_bad, static_cast<double>(regret_bad) / R, 0.0);
    row.note = "S_t <= R_t / t; S_t non-increasing; R_t finite";
    rows.push_back(finalize(row));
  }
  if (!squared) {
    ValidationRow row = make_row("information_gain_inequality", R, info_bad, static_cast<double>(info_bad) / R, 0.0);
    row.note = config.kernel.variance <= 1.0 ? "sum sigma^2 <= c_eta I(X_t)"
                                             : "kernel variance above 1: inequality not guaranteed";
    rows.push_back(finalize(row));
  }
  const std::size_t T = config.t_max;
  if (T >= 4) {
    std::vector<double> early, late;
    const std::size_t t0 = (T + 3) / 4;
    for (const auto& rec : records) {
      early.push_back(rec.rows[t0 - 1].cum_regret / static_cast<double>(t0));
      late.push_back(rec.rows[T - 1].cum_regret / static_cast<double>(T));
    }
    ValidationRow row = make_row("sublinear_regret", R, 0, quantile(late, 0.5), quantile(early, 0.5));
    row.direction = Direction::kBelow;
    row.note = "median R_T/T vs median R_t/t at t=" + std::to_string(t0);
    rows.push_back(finalize(row));
  }

  OutputGuard guard(config.output_dir);
  {
    auto out = guard.open("tree.csv");
    write_tree(out, tree);
    check_stream(out, "tree.csv");
  }
  for (std::size_t r = 0; r < R; ++r) {
    char name[40];
    std::snprintf(name, sizeof name, "replicate_%04zu.csv", r);
    auto out = guard.open(name);
    write_regret_csv(out, records[r]);
    check_stream(out, name);
  }
  {
    auto out = guard.open("aggregate.csv");
    out << "t,cum_regret_q25,cum_regret_median,cum_regret_q75,simple_regret_q25,simple_regret_median,"
           "simple_regret_q75,bound_q25,bound_median,bound_q75\n";
    for (std::size_t t = 0; t < T; ++t) {
      std::vector<double> cr, sr, b;
      for (std::size_t r = 0; r < R; ++r) {
        cr.push_back(records[r].rows[t].cum_regret);
        sr.push_back(records[r].rows[t].simple_regret);
        b.push_back(bounds[r].chaining[t]);
      }
      out << (t + 1);
      for (const auto* v : {&cr, &sr, &b}) {
        for (double q : {0.25, 0.5, 0.75}) out << ',' << format_real(quantile(*v, q));
      }
      out << '\n';
    }
    check_stream(out, "aggregate.csv");
  }
  {
    auto out = guard.open("report.csv");
    write_validation_report(out, result.report);
    check_stream(out, "report.csv");
  }
  result.files = guard.files();
  result.records = std::move(records);
  guard.release();
  return result;
}

std::vector<BenchRow> bench_tree_build(const std::vector<std::size_t>& sizes, int repeats, std::uint64_t seed) {
  if (repeats < 1) throw ArgumentError("repeats must be at least 1");
  std::vector<BenchRow> out;
  for (std::size_t n : sizes) {
    if (n == 0) throw ArgumentError("bench sizes must be positive");
    Rng rng = make_stream(seed, n);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<double> flat(2 * n);
    for (auto& v : flat) v = unif(rng);
    const PointCloud cloud(2, flat);
    BenchRow row;
    row.n = n;
    row.seconds = std::numeric_limits<double>::infinity();
    for (int k = 0; k < repeats; ++k) {
      const auto t0 = std::chrono::steady_clock::now();
      const auto space = FiniteMetricSpace::from_points(cloud);
      const auto tree = prune_backward(build_forward(space), space, 1.0);
      const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      row.seconds = std::min(row.seconds, dt);
      row.depth = tree.max_depth();
      row.nodes = tree.size();
    }
    out.push_back(row);
  }
  return out;
}

}  // namespace chainbandit
