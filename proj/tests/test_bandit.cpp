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

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <set>

#include "chainbandit/bandit.hpp"
#include "chainbandit/errors.hpp"
#include "test_support.hpp"

using namespace chainbandit;
using chainbandit::testing::line_space;

namespace {

struct Setup {
  PointCloud cloud;
  FiniteMetricSpace space;
  Eigen::MatrixXd cov;
  ChainingTree tree;
  std::vector<double> omega;
};

Setup make_setup(const std::string& space, const Kernel& k, double u = 2.0, double a = 2.0) {
  Setup s{generate_points(space), FiniteMetricSpace::from_matrix(1, {0.0}), {}, {}, {}};
  s.space = FiniteMetricSpace::from_points(s.cloud, kernel_canonical_rule(k));
  s.cov = gram_matrix(k, s.cloud);
  s.tree = build_search_tree(s.space, CapacitySchedule::kGeometric, u);
  s.omega = omega_table(s.tree, s.space, u, a, SmoothnessModel::gaussian());
  return s;
}

std::vector<double> draw_truth(const Eigen::MatrixXd& cov, std::uint64_t seed) {
  Rng rng = make_stream(seed, 0);
  const Eigen::VectorXd f = PriorSampler(cov).draw(rng);
  return {f.data(), f.data() + f.size()};
}

// Test-side candidate set: distinct non-pruned locations at depth <= h.
std::set<PointId> candidates(const ChainingTree& t, int h) {
  std::set<PointId> out;
  for (const auto& n : t.nodes())
    if (n.depth <= h && !n.pruned) out.insert(n.location);
  return out;
}

}  // namespace

TEST_CASE("half-log2 depth rule") {
  CHECK(depth_half_log2(1, 10) == 0);
  CHECK(depth_half_log2(2, 10) == 1);
  CHECK(depth_half_log2(4, 10) == 1);
  CHECK(depth_half_log2(5, 10) == 2);
  CHECK(depth_half_log2(16, 10) == 2);
  CHECK(depth_half_log2(17, 10) == 3);
  CHECK(depth_half_log2(1u << 20, 10) == 10);
  CHECK(depth_half_log2(1u << 30, 3) == 3);
  for (std::size_t i = 1; i < 5000; ++i) {
    const int h = depth_half_log2(i, 100);
    CHECK(std::ldexp(1.0, 2 * h) >= static_cast<double>(i));
    if (h > 0) CHECK(std::ldexp(1.0, 2 * (h - 1)) < static_cast<double>(i));
  }
  CHECK_THROWS_AS(depth_half_log2(0, 3), ArgumentError);
}

TEST_CASE("omega threshold") {
  CHECK(omega_threshold(2) == doctest::Approx(0.58870501125773735).epsilon(1e-14));
  CHECK(omega_threshold(3) == omega_threshold(2));
  double prev = omega_threshold(2);
  for (std::size_t i = 3; i < 10000; ++i) {
    const double v = omega_threshold(i);
    CHECK(v <= prev);
    CHECK(v <= std::sqrt(std::log(static_cast<double>(i)) / static_cast<double>(i)) + 1e-15);
    prev = v;
  }
  CHECK_THROWS_AS(omega_threshold(1), ArgumentError);
}

TEST_CASE("omega depth rule on the single-chain table") {
  const std::vector<double> chain{3.7040082262268709, 2.3815672440899088, 1.4539362113248178, 0.84939803842424099,
                                  0.45145126685101791, 0.18366018643811678, 0.0};
  CHECK(depth_omega_threshold(chain, 2) == 4);
  int prev = 0;
  for (std::size_t i = 2; i < 100000; i += 97) {
    const int h = depth_omega_threshold(chain, i);
    CHECK(h >= prev);
    prev = h;
  }
  CHECK(depth_omega_threshold(std::vector<double>{5.0, 4.0}, 2) == 1);
  CHECK_THROWS_AS(depth_omega_threshold(std::vector<double>{}, 2), ArgumentError);
}

TEST_CASE("depth rule names") {
  CHECK(parse_depth_rule("halflog2") == DepthRule::kHalfLog2);
  CHECK(parse_depth_rule("omega") == DepthRule::kOmegaThreshold);
  CHECK(std::string(depth_rule_name(DepthRule::kOmegaThreshold)) == "omega");
  CHECK_THROWS_AS(parse_depth_rule("fixed"), ArgumentError);
}

TEST_CASE("config validation") {
  OptimizerConfig c;
  CHECK_NOTHROW(c.validate());
  c.a = 1.0;
  CHECK_THROWS_WITH_AS(c.validate(), "a must exceed 1", ConfigError);
  c = {};
  c.u = 0.0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = {};
  c.eta2 = -1.0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("candidate levels are nested and end with every point") {
  const auto s = make_setup("grid(1,40,1)", parse_kernel("se:ls=0.2"));
  const auto levels = candidate_levels(s.tree);
  REQUIRE(levels.size() == static_cast<std::size_t>(s.tree.max_depth()) + 1);
  for (int h = 0; h <= s.tree.max_depth(); ++h) {
    const auto want = candidates(s.tree, h);
    CHECK(std::vector<PointId>(want.begin(), want.end()) == levels[h]);
  }
  CHECK(levels.back().size() == 40);
}

TEST_CASE("UCB step agrees with a brute-force scan over an independent posterior") {
  const Kernel k = parse_kernel("se:ls=0.3");
  const auto s = make_setup("grid(1,5,1)", k);
  OptimizerConfig cfg;
  cfg.u = 1.5;
  cfg.eta2 = 0.05;
  GpUcb opt(s.cov, s.tree, s.omega, cfg);
  GPPosterior ref(k, cfg.eta2);
  const double log_zeta2 = std::log(std::numbers::pi * std::numbers::pi / 6.0);
  Rng rng = make_stream(5);
  std::normal_distribution<double> z;
  for (std::size_t i = 1; i <= 12; ++i) {
    const int h = std::min(depth_half_log2(i, 100), s.tree.max_depth());
    const double n_h = h == 0 ? 0.0 : std::ldexp(1.0, h);
    const double u_i = cfg.u + n_h + 2.0 * std::log(static_cast<double>(i)) + log_zeta2;
    PointId best = kNoPoint;
    double best_v = -INFINITY;
    for (PointId x : candidates(s.tree, h)) {
      const auto p = ref.predict(s.cloud[x]);
      const double v = p.mu + p.sigma * std::sqrt(2.0 * u_i);
      if (v > best_v + 1e-9) {
        best_v = v;
        best = x;
      }
    }
    const auto c = opt.step(i);
    CHECK(c.depth == h);
    CHECK(c.u_i == doctest::Approx(u_i).epsilon(1e-12));
    CHECK(c.x == best);
    CHECK(c.ucb == doctest::Approx(best_v).epsilon(1e-8));
    const double y = z(rng);
    opt.observe(c.x, y);
    ref.update_in_place(s.cloud[c.x], y);
  }
}

TEST_CASE("ties break toward the smallest id") {
  const Eigen::MatrixXd cov = Eigen::MatrixXd::Identity(4, 4);
  const auto space = FiniteMetricSpace::from_matrix(4, {0, 1, 1, 1, 1, 0, 1, 1, 1, 1, 0, 1, 1, 1, 1, 0});
  const auto tree = build_forward(space, CapacitySchedule::kEntropy);
  const auto omega = omega_table(tree, space, 2.0, 2.0, SmoothnessModel::gaussian());
  OptimizerConfig cfg;
  GpUcb opt(cov, tree, omega, cfg);
  CHECK(opt.step(1).x == 0);
  const auto deepest = opt.step(1000);
  CHECK(deepest.x == 0);
  opt.observe(0, -5.0);
  CHECK(opt.step(1000).x == 1);
}

TEST_CASE("argmax is invariant under a joint rescaling of prior, noise and observations") {
  const auto s = make_setup("grid(1,30,1)", parse_kernel("matern32:ls=0.2"));
  OptimizerConfig cfg;
  cfg.eta2 = 0.02;
  OptimizerConfig scaled_cfg = cfg;
  const double c = 3.0;
  scaled_cfg.eta2 = cfg.eta2 * c * c;
  GpUcb a(s.cov, s.tree, s.omega, cfg);
  GpUcb b(s.cov * (c * c), s.tree, s.omega, scaled_cfg);
  const auto truth = draw_truth(s.cov, 9);
  for (std::size_t i = 1; i <= 40; ++i) {
    const auto ca = a.step(i), cb = b.step(i);
    REQUIRE(ca.x == cb.x);
    CHECK(cb.ucb == doctest::Approx(c * ca.ucb).epsilon(1e-8));
    a.observe(ca.x, truth[ca.x]);
    b.observe(cb.x, c * truth[cb.x]);
  }
}

TEST_CASE("regret bookkeeping") {
  const auto s = make_setup("grid(1,32,1)", parse_kernel("se:ls=0.2"));
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    OptimizerConfig cfg;
    cfg.t_max = 60;
    cfg.seed = seed;
    const auto truth = draw_truth(s.cov, seed);
    const auto rec = run_gp_ucb(s.cov, s.tree, s.omega, cfg, truth);
    REQUIRE(rec.rows.size() == 60);
    const double best = *std::max_element(truth.begin(), truth.end());
    double cum = 0.0, seen = -INFINITY;
    for (std::size_t t = 0; t < rec.rows.size(); ++t) {
      const auto& r = rec.rows[t];
      CHECK(r.iter == t + 1);
      CHECK(r.inst_regret == doctest::Approx(best - truth[r.point]));
      CHECK(r.inst_regret >= 0.0);
      cum += r.inst_regret;
      seen = std::max(seen, truth[r.point]);
      CHECK(r.cum_regret == doctest::Approx(cum));
      CHECK(r.simple_regret == doctest::Approx(best - seen));
      CHECK(r.simple_regret <= r.cum_regret / static_cast<double>(t + 1) + 1e-12);
      CHECK(r.width >= 0.0);
      CHECK(r.omega == s.omega[r.depth]);
    }
    CHECK(run_gp_ucb(s.cov, s.tree, s.omega, cfg, truth).queries() == rec.queries());
  }
}

TEST_CASE("zero horizon and single-arm spaces") {
  const auto s = make_setup("grid(1,8,1)", parse_kernel("se:ls=0.5"));
  OptimizerConfig cfg;
  cfg.t_max = 0;
  const auto truth = draw_truth(s.cov, 1);
  const auto rec = run_gp_ucb(s.cov, s.tree, s.omega, cfg, truth);
  CHECK(rec.rows.empty());
  const auto bound = regret_bound_rhs(rec, s.cov, cfg);
  CHECK(bound.chaining.empty());
  CHECK(bound.closed_form.empty());

  const auto one = make_setup("grid(1,1,1)", parse_kernel("se:ls=0.5"));
  cfg.t_max = 10;
  const auto r1 = run_gp_ucb(one.cov, one.tree, one.omega, cfg, std::vector<double>{0.7});
  for (const auto& r : r1.rows) {
    CHECK(r.point == 0);
    CHECK(r.cum_regret == 0.0);
  }
}

TEST_CASE("live mode records observations and leaves regret undefined") {
  const auto s = make_setup("grid(1,16,1)", parse_kernel("se:ls=0.2"));
  OptimizerConfig cfg;
  cfg.t_max = 12;
  std::vector<PointId> asked;
  const auto rec = run_gp_ucb_live(s.cov, s.tree, s.omega, cfg, [&](PointId x) {
    asked.push_back(x);
    return std::sin(static_cast<double>(x));
  });
  CHECK(!rec.has_truth);
  CHECK(rec.queries() == asked);
  for (const auto& r : rec.rows) {
    CHECK(std::isnan(r.cum_regret));
    CHECK(r.y == std::sin(static_cast<double>(r.point)));
  }
}

TEST_CASE("input validation") {
  const auto s = make_setup("grid(1,8,1)", parse_kernel("se:ls=0.5"));
  OptimizerConfig cfg;
  CHECK_THROWS_AS(run_gp_ucb(s.cov, s.tree, s.omega, cfg, std::vector<double>{}), ArgumentError);
  CHECK_THROWS_AS(run_gp_ucb(s.cov, s.tree, s.omega, cfg, std::vector<double>(3, 0.0)), ArgumentError);
  CHECK_THROWS_AS(run_gp_ucb(s.cov, s.tree, std::vector<double>{1.0}, cfg, std::vector<double>(8, 0.0)), ArgumentError);
  CHECK_THROWS_AS(GpUcb(Eigen::MatrixXd::Identity(3, 3), s.tree, s.omega, cfg), ArgumentError);
  cfg.a = 0.5;
  CHECK_THROWS_AS(GpUcb(s.cov, s.tree, s.omega, cfg), ConfigError);
}

TEST_CASE("regret bound sequences") {
  const auto s = make_setup("grid(1,24,1)", parse_kernel("se:ls=0.2"));
  OptimizerConfig cfg;
  cfg.t_max = 40;
  cfg.eta2 = 0.05;
  const auto truth = draw_truth(s.cov, 3);
  const auto rec = run_gp_ucb(s.cov, s.tree, s.omega, cfg, truth);
  const auto b = regret_bound_rhs(rec, s.cov, cfg);
  REQUIRE(b.chaining.size() == 40);
  REQUIRE(b.closed_form.size() == 40);
  REQUIRE(b.info_gain.size() == 40);
  double chain = 0.0, omega_sum = 0.0, u_max = 0.0;
  for (std::size_t t = 1; t <= 40; ++t) {
    const auto& r = rec.rows[t - 1];
    chain += r.omega + r.width;
    omega_sum += r.omega;
    u_max = std::max(u_max, r.u_i);
    CHECK(b.chaining[t - 1] == doctest::Approx(chain));
    Eigen::MatrixXd sub(t, t);
    for (std::size_t i = 0; i < t; ++i)
      for (std::size_t j = 0; j < t; ++j) sub(i, j) = s.cov(rec.rows[i].point, rec.rows[j].point);
    const double gain = information_gain(sub, cfg.eta2);
    CHECK(b.info_gain[t - 1] == doctest::Approx(gain).epsilon(1e-9));
    const double closed = 2.0 * std::sqrt(2.0 * c_eta(cfg.eta2) * t * u_max * gain) + omega_sum;
    CHECK(b.closed_form[t - 1] == doctest::Approx(closed).epsilon(1e-9));
    if (t > 1) {
      CHECK(b.chaining[t - 1] >= b.chaining[t - 2]);
      CHECK(b.closed_form[t - 1] >= b.closed_form[t - 2]);
    }
  }
  // sum of widths <= 2 sqrt(2 c_eta t u_t I_t), so the chaining bound is the tighter one
  for (std::size_t t = 0; t < 40; ++t) CHECK(b.chaining[t] <= b.closed_form[t] * (1 + 1e-9));
  bool within = true;
  for (std::size_t t = 0; t < 40; ++t) within = within && rec.rows[t].cum_regret <= b.chaining[t];
  CHECK(regret_within_bound(rec, b) == within);
}

TEST_CASE("squared-GP runs") {
  const Kernel k = parse_kernel("se:ls=0.2");
  const auto cloud = generate_points("grid(1,16,1)");
  const auto space = FiniteMetricSpace::from_points(cloud, squared_gp_rule(k));
  const auto cov = gram_matrix(k, cloud);
  const auto tree = build_search_tree(space, CapacitySchedule::kGeometric, 2.0);
  const auto model = SmoothnessModel::squared_gp(3, 1.0);
  const auto omega = omega_table(tree, space, 2.0, 2.0, model);
  OptimizerConfig cfg;
  cfg.t_max = 25;

  SUBCASE("zero truth has zero regret") {
    const std::vector<std::vector<double>> zero(3, std::vector<double>(16, 0.0));
    const auto rec = run_squared_gp_ucb(cov, tree, omega, cfg, zero);
    CHECK(rec.channels == 3);
    for (const auto& r : rec.rows) {
      CHECK(r.cum_regret == 0.0);
      CHECK(r.ucb <= 0.0);
    }
  }
  SUBCASE("sampled truth") {
    std::vector<std::vector<double>> g;
    for (std::uint64_t j = 0; j < 3; ++j) g.push_back(draw_truth(cov, 100 + j));
    const auto rec = run_squared_gp_ucb(cov, tree, omega, cfg, g);
    std::vector<double> f(16, 0.0);
    for (std::size_t x = 0; x < 16; ++x)
      for (const auto& gj : g) f[x] -= gj[x] * gj[x];
    const double best = *std::max_element(f.begin(), f.end());
    CHECK(best <= 0.0);
    for (const auto& r : rec.rows) {
      CHECK(r.inst_regret == doctest::Approx(best - f[r.point]));
      CHECK(r.ucb <= 0.0);
      CHECK(r.width >= 0.0);
    }
    const auto b = regret_bound_rhs(rec, cov, cfg);
    CHECK(b.chaining.size() == 25);
    CHECK(b.closed_form.empty());
  }
  SUBCASE("mismatched channels") {
    CHECK_THROWS_AS(run_squared_gp_ucb(cov, tree, omega, cfg, {}), ArgumentError);
    CHECK_THROWS_AS(run_squared_gp_ucb(cov, tree, omega, cfg, {std::vector<double>(3, 0.0)}), ArgumentError);
  }
}
