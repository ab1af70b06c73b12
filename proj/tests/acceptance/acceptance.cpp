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

// Acceptance suite: one PASS/FAIL line per criterion. Exit status 1 when any
// criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "chainbandit/bandit.hpp"
#include "chainbandit/chaining.hpp"
#include "chainbandit/gp.hpp"
#include "chainbandit/harness.hpp"
#include "chainbandit/io.hpp"
#include "chainbandit/kernel.hpp"
#include "chainbandit/metric.hpp"

namespace cb = chainbandit;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

// Every tree built anywhere in the suite, checked under criterion 11.
std::vector<std::pair<std::string, bool>> g_trees;

void record_tree(const std::string& name, const cb::ChainingTree& tree, const cb::FiniteMetricSpace& space) {
  const auto v = cb::validate_tree(tree, space);
  for (const auto& f : v.failures) std::fprintf(stderr, "  tree %s: %s\n", name.c_str(), f.c_str());
  g_trees.emplace_back(name, v.ok());
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

std::string failing_rows(const cb::ValidationReport& rep) {
  std::string out;
  for (const auto& r : rep.rows) {
    if (!r.pass) out += " " + r.claim + "(rate=" + cb::format_real(r.rate) + ",bound=" + cb::format_real(r.bound) + ")";
  }
  return out;
}

fs::path scratch_dir(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("chainbandit_acceptance_" + name);
  fs::remove_all(p);
  return p;
}

Outcome upper_bound() {
  cb::ExperimentConfig c;
  c.space = "grid(1,100,1)";
  c.kernel = cb::parse_kernel("se:ls=0.2");
  c.schedule = cb::CapacitySchedule::kEntropy;
  c.u = 2.0;
  c.a = 2.0;
  c.replicates = 2000;
  const auto r = cb::resolve_space(c.space, c.kernel);
  record_tree("upper grid(1,100,1) entropy", cb::build_search_tree(r.space, c.schedule, c.u), r.space);
  const auto rep = cb::validate_upper(c);
  const auto& joint = rep.row("upper_joint");
  return {joint.pass, fmt("joint violation rate %.4f <= %.4f + 3 se (se %.4f)", joint.rate, joint.bound, joint.std_error)};
}

Outcome lower_bound() {
  cb::ExperimentConfig c;
  c.space = "star(64)";
  c.kernel = cb::parse_kernel("linear");
  c.u = 1.0;
  c.replicates = 1000;
  const auto r = cb::resolve_space(c.space, c.kernel);
  record_tree("lower star(64) pruned", cb::prune_backward(cb::build_forward(r.space), r.space, c.u), r.space);
  const auto rep = cb::validate_lower(c);
  std::string detail;
  for (const auto& row : rep.rows) {
    if (row.claim.rfind("lower_", 0) == 0) detail += row.claim + " rate=" + cb::format_real(row.rate) + " ";
  }
  detail += "ratio q05=" + cb::format_real(rep.ratio_quantiles.at(0));
  if (!rep.all_pass()) detail += "; failing:" + failing_rows(rep);
  return {rep.all_pass() && rep.ratio_quantiles.at(0) > 0.0, detail};
}

Outcome lemma_rows(const std::string& prefix, std::size_t draws, std::size_t expected_rows) {
  cb::ExperimentConfig c;
  c.draws = draws;
  const auto rep = cb::validate_lemmas(c);
  std::size_t n = 0, bad = 0;
  std::string failing;
  for (const auto& r : rep.rows) {
    if (r.claim.rfind(prefix, 0) != 0) continue;
    ++n;
    if (!r.pass) {
      ++bad;
      failing += " " + r.claim + "(rate=" + cb::format_real(r.rate) + ",bound=" + cb::format_real(r.bound) + ")";
    }
  }
  std::string detail = std::to_string(n - bad) + "/" + std::to_string(n) + " cells pass";
  if (!failing.empty()) detail += ";" + failing;
  return {bad == 0 && n >= expected_rows, detail};
}

Outcome gaussian_max() {
  cb::ExperimentConfig c;
  c.draws = 1'000'000;  // 10^5 trials per cell
  const auto rep = cb::validate_lemmas(c);
  bool ok = true;
  std::string detail;
  for (const char* claim : {"gauss_max_m=26_u=1", "gauss_max_m=260_u=10"}) {
    const auto& r = rep.row(claim);
    ok = ok && r.pass && r.trials >= 100000;
    detail += std::string(claim) + " rate=" + cb::format_real(r.rate) + " >= " + cb::format_real(r.bound) + " - 3se; ";
  }
  return {ok, detail};
}

Outcome posterior_oracle() {
  cb::Rng rng = cb::make_stream(2026, 5);
  const char* specs[] = {"se:ls=0.3", "se:ls=1.2,var=2", "matern12:ls=0.5", "matern32:ls=0.4", "matern52:ls=0.8", "linear"};
  std::uniform_int_distribution<std::size_t> pick_kernel(0, 5), pick_n(1, 20), pick_dim(1, 3);
  std::uniform_real_distribution<double> unif(0.0, 1.0), noise(0.001, 0.5);
  std::normal_distribution<double> z;
  double worst = 0.0;
  for (int design = 0; design < 100; ++design) {
    const cb::Kernel k = cb::parse_kernel(specs[pick_kernel(rng)]);
    const std::size_t n = pick_n(rng), d = pick_dim(rng);
    const double eta2 = noise(rng);
    std::vector<double> flat(n * d), y(n);
    for (auto& v : flat) v = unif(rng);
    for (auto& v : y) v = z(rng);
    const cb::PointCloud x(d, flat);
    Eigen::MatrixXd c = cb::gram_matrix(k, x);
    c.diagonal().array() += eta2;
    const Eigen::MatrixXd inv = c.fullPivLu().inverse();
    const Eigen::VectorXd w = inv * Eigen::Map<const Eigen::VectorXd>(y.data(), static_cast<Eigen::Index>(n));
    cb::GPPosterior post(k, eta2);
    for (std::size_t i = 0; i < n; ++i) post.update_in_place(x[i], y[i]);
    for (int probe = 0; probe < 10; ++probe) {
      std::vector<double> q(d);
      for (auto& v : q) v = unif(rng);
      Eigen::VectorXd kx(static_cast<Eigen::Index>(n));
      for (std::size_t i = 0; i < n; ++i) kx(static_cast<Eigen::Index>(i)) = k(x[i], q);
      const double mu = kx.dot(w), var = k(q, q) - kx.dot(inv * kx);
      const auto p = post.predict(q);
      worst = std::max({worst, std::abs(p.mu - mu), std::abs(p.variance - var)});
    }
  }
  return {worst <= 1e-8, fmt("max |diff| over 100 designs x 10 probes = %.3e (tolerance 1e-8)", worst)};
}

struct GpSuite {
  cb::ExperimentResult result;
  Eigen::MatrixXd cov;
  double eta2 = 0.0;
};

GpSuite gp_suite() {
  cb::ExperimentConfig c;
  c.space = "grid(1,64,1)";
  c.kernel = cb::parse_kernel("se:ls=0.2");
  c.u = 2.0;
  c.a = 2.0;
  c.t_max = 200;
  c.replicates = 500;
  const auto dir = scratch_dir("gp");
  c.output_dir = dir.string();
  const auto r = cb::resolve_space(c.space, c.kernel);
  record_tree("gp grid(1,64,1)", cb::build_search_tree(r.space, c.schedule, c.u), r.space);
  GpSuite s{cb::run_experiment(c), cb::gram_matrix(c.kernel, *r.cloud), c.eta2};
  fs::remove_all(dir);
  return s;
}

Outcome information_gain_inequality(const GpSuite& s) {
  const double ce = cb::c_eta(s.eta2);
  std::size_t checks = 0, bad = 0;
  double worst = -INFINITY;
  for (const auto& rec : s.result.records) {
    const auto t = static_cast<Eigen::Index>(rec.rows.size());
    Eigen::MatrixXd gram(t, t);
    for (Eigen::Index i = 0; i < t; ++i)
      for (Eigen::Index j = 0; j < t; ++j) gram(i, j) = s.cov(rec.rows[i].point, rec.rows[j].point);
    const auto gains = cb::information_gain_prefixes(gram, s.eta2);
    double sum = 0.0;
    for (Eigen::Index i = 0; i < t; ++i) {
      sum += rec.rows[i].prior_variance;
      const double slack = sum - ce * gains[i];
      worst = std::max(worst, slack);
      ++checks;
      bad += slack > 1e-9 ? 1 : 0;
    }
  }
  return {bad == 0 && checks > 0, fmt("%.0f prefix checks, max(sum sigma^2 - c_eta I) = %.3e", static_cast<double>(checks), worst)};
}

Outcome regret_frequency(const GpSuite& s) {
  const auto& r = s.result.report.row("regret_bound");
  return {r.pass, fmt("fraction within bound %.4f >= %.4f - 3 se (se %.4f)", r.rate, r.bound, r.std_error)};
}

Outcome sublinearity(const GpSuite& s) {
  const auto& sub = s.result.report.row("sublinear_regret");
  std::size_t bad = 0;
  for (const auto& rec : s.result.records) {
    for (std::size_t k = 0; k < rec.rows.size(); ++k) {
      if (!(rec.rows[k].simple_regret <= rec.rows[k].cum_regret / static_cast<double>(k + 1))) ++bad;
    }
  }
  return {sub.pass && bad == 0,
          fmt("median R_200/200 = %.4f < median R_50/50 = %.4f; S_t > R_t/t on %.0f rows", sub.rate, sub.bound,
              static_cast<double>(bad))};
}

Outcome squared_gp() {
  cb::ExperimentConfig c;
  c.space = "grid(1,32,1)";
  c.kernel = cb::parse_kernel("se:ls=0.2");
  c.objective = cb::Objective::kSquaredGp;
  c.channels = 4;
  c.u = 2.0;
  c.replicates = 50;
  const auto dir = scratch_dir("sq");
  c.output_dir = dir.string();
  const auto r = cb::resolve_space(c.space, cb::squared_gp_rule(c.kernel));
  record_tree("squared grid(1,32,1)", cb::build_search_tree(r.space, c.schedule, c.u), r.space);
  const auto res = cb::run_experiment(c);
  fs::remove_all(dir);
  const auto& cov = res.report.row("interval_coverage");
  const auto& cons = res.report.row("simple_regret_consistency");
  return {cov.pass && cons.pass,
          fmt("coverage %.3f >= %.4f - 3 se; %.0f runs with non-finite R_t or rising S_t", cov.rate, cov.bound,
              static_cast<double>(cons.violations))};
}

Outcome cover_optimality() {
  cb::Rng rng = cb::make_stream(2026, 10);
  std::uniform_int_distribution<std::size_t> pick_n(2, 12), pick_dim(1, 3);
  std::uniform_real_distribution<double> unif(0.0, 1.0), pick_eps(0.05, 0.8);
  std::size_t invalid = 0, over = 0;
  double worst_ratio = 0.0;
  for (int k = 0; k < 200; ++k) {
    const std::size_t n = pick_n(rng), d = pick_dim(rng);
    std::vector<double> flat(n * d);
    for (auto& v : flat) v = unif(rng);
    const auto space = cb::FiniteMetricSpace::from_points(cb::PointCloud(d, flat));
    const double eps = pick_eps(rng);
    const auto greedy = cb::greedy_cover(space, eps);
    const auto best = cb::brute_force_min_cover(space, eps);
    std::size_t d_max = 0;
    for (cb::PointId i = 0; i < n; ++i) {
      std::size_t ball = 0;
      for (cb::PointId j = 0; j < n; ++j) ball += space(i, j) <= eps ? 1 : 0;
      d_max = std::max(d_max, ball);
    }
    invalid += cb::is_valid_cover(space, greedy) && cb::is_valid_cover(space, best) ? 0 : 1;
    const double bound = (1.0 + std::log(static_cast<double>(d_max))) * static_cast<double>(best.centers.size());
    over += static_cast<double>(greedy.centers.size()) <= bound + 1e-12 ? 0 : 1;
    worst_ratio = std::max(worst_ratio, static_cast<double>(greedy.centers.size()) / best.centers.size());
    record_tree("corpus " + std::to_string(k), cb::build_forward(space), space);
    record_tree("corpus pruned " + std::to_string(k), cb::prune_backward(cb::build_forward(space), space, 1.0), space);
  }
  return {invalid == 0 && over == 0,
          fmt("200 spaces: %.0f invalid covers, %.0f above (1+ln d_max)|opt|, worst |greedy|/|opt| = %.3f",
              static_cast<double>(invalid), static_cast<double>(over), worst_ratio)};
}

Outcome tree_invariants() {
  for (std::size_t n : {8u, 50u, 200u}) {
    const auto s = cb::resolve_space("star(" + std::to_string(n) + ")");
    record_tree("star(" + std::to_string(n) + ") pruned", cb::prune_backward(cb::build_forward(s.space), s.space, 1.0),
                s.space);
  }
  for (const char* g : {"grid(2,16,1)", "ellipsoid(2,21,1,0.3)"}) {
    const auto s = cb::resolve_space(g);
    record_tree(g, cb::build_forward(s.space, cb::CapacitySchedule::kEntropy), s.space);
    record_tree(std::string(g) + " pruned", cb::prune_backward(cb::build_forward(s.space), s.space, 2.0), s.space);
  }
  std::size_t bad = 0;
  for (const auto& [name, ok] : g_trees) bad += ok ? 0 : 1;
  const auto bench = cb::bench_tree_build({256, 512, 1024}, 3, 0);
  const double r1 = bench[1].seconds / bench[0].seconds, r2 = bench[2].seconds / bench[1].seconds;
  const double total = bench[2].seconds / bench[0].seconds;
  // Quadratic growth within a factor 2: at most 8x per doubling.
  const bool scaling = r1 <= 8.0 && r2 <= 8.0 && total <= 32.0;
  return {bad == 0 && scaling,
          std::to_string(g_trees.size() - bad) + "/" + std::to_string(g_trees.size()) + " trees valid; " +
              fmt("build time 256: %.4fs, 512: x%.2f, 1024: x%.2f", bench[0].seconds, r1, r2)};
}

}  // namespace

int main() {
  using clock = std::chrono::steady_clock;
  int failed = 0;
  auto report = [&](int id, const char* name, const std::function<Outcome()>& fn) {
    const auto start = clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(clock::now() - start).count();
    failed += o.pass ? 0 : 1;
    std::printf("criterion %2d %-32s %s  [%.1fs] %s\n", id, name, o.pass ? "PASS" : "FAIL", secs, o.detail.c_str());
    std::fflush(stdout);
  };

  report(1, "upper-bound-violation", upper_bound);
  report(2, "lower-bound-anticoncentration", lower_bound);
  report(3, "squared-gaussian-tails", [] { return lemma_rows("sqgauss_", 1'000'000, 36); });
  report(4, "gaussian-max-anticoncentration", gaussian_max);
  report(5, "posterior-oracle", posterior_oracle);
  GpSuite suite;
  bool suite_ok = true;
  std::string suite_error;
  try {
    suite = gp_suite();
  } catch (const std::exception& e) {
    suite_ok = false;
    suite_error = e.what();
  }
  auto with_suite = [&](Outcome (*fn)(const GpSuite&)) {
    return [&, fn] { return suite_ok ? fn(suite) : Outcome{false, "suite failed: " + suite_error}; };
  };
  report(6, "information-gain-inequality", with_suite(information_gain_inequality));
  report(7, "regret-bound-frequency", with_suite(regret_frequency));
  report(8, "sublinear-regret", with_suite(sublinearity));
  report(9, "squared-gp-coverage", squared_gp);
  report(10, "cover-optimality", cover_optimality);
  report(11, "tree-invariants-and-scaling", tree_invariants);
  std::printf("%d/11 criteria passed\n", 11 - failed);
  return failed == 0 ? 0 : 1;
}
