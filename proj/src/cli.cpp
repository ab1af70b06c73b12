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

#include "chainbandit/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include "chainbandit/bandit.hpp"
#include "chainbandit/errors.hpp"
#include "chainbandit/gp.hpp"
#include "chainbandit/harness.hpp"
#include "chainbandit/io.hpp"

namespace chainbandit {
namespace {

void emit(const std::string& path, std::ostream& out, const std::function<void(std::ostream&)>& write) {
  if (path.empty() || path == "-") {
    write(out);
    return;
  }
  std::ofstream file = open_output(path);
  write(file);
  file.flush();
  if (!file) throw IoError("failed writing '" + path + "'");
}

std::optional<Kernel> optional_kernel(const std::string& spec) {
  if (spec.empty()) return std::nullopt;
  return parse_kernel(spec);
}

// Flags shared by the validation subcommands; a config file is read first
// and explicit flags override it.
struct SuiteOptions {
  std::string config_path, space, kernel, schedule, out;
  double u = 0.0, a = 0.0;
  std::size_t replicates = 0, draws = 0;
  long long seed = -1;

  void attach(CLI::App* cmd) {
    cmd->add_option("--config", config_path, "config file");
    cmd->add_option("--space", space, "space file or generator");
    cmd->add_option("--kernel", kernel, "kernel spec");
    cmd->add_option("--schedule", schedule, "geometric|entropy");
    cmd->add_option("--u", u, "confidence parameter");
    cmd->add_option("--a", a, "zeta exponent");
    cmd->add_option("--replicates", replicates, "Monte Carlo replicates");
    cmd->add_option("--draws", draws, "draws per lemma cell");
    cmd->add_option("--seed", seed, "seed base");
    cmd->add_option("--out", out, "report CSV (default stdout)");
  }

  ExperimentConfig resolve() const {
    ExperimentConfig c = config_path.empty() ? ExperimentConfig{} : parse_config(config_path);
    if (!space.empty()) c.space = space;
    if (!kernel.empty()) c.kernel = parse_kernel(kernel);
    if (!schedule.empty()) c.schedule = parse_schedule(schedule);
    if (u != 0.0) c.u = u;
    if (a != 0.0) c.a = a;
    if (replicates) c.replicates = replicates;
    if (draws) c.draws = draws;
    if (seed >= 0) c.seed = static_cast<std::uint64_t>(seed);
    c.validate();
    return c;
  }
};

int report_exit(const ValidationReport& report, const std::string& path, std::ostream& out, std::ostream& err) {
  emit(path, out, [&](std::ostream& o) { write_validation_report(o, report); });
  for (const auto& r : report.rows) {
    if (!r.pass) err << "FAIL " << r.claim << ": rate " << format_real(r.rate) << " vs bound " << format_real(r.bound) << '\n';
  }
  return report.all_pass() ? kExitOk : kExitValidationFailed;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Chaining-based bandit optimization over finite metric spaces", "chainbandit"};
  app.require_subcommand(1);
  int code = kExitOk;
  std::function<int()> action;

  // cover
  auto* cover = app.add_subcommand("cover", "greedy (or exhaustive) epsilon-cover of a space");
  std::string cover_space, cover_kernel, cover_mode = "greedy", cover_out;
  double cover_eps = 0.0;
  cover->add_option("--space", cover_space, "space file or generator")->required();
  cover->add_option("--kernel", cover_kernel, "use the kernel's canonical metric");
  cover->add_option("--eps", cover_eps, "cover radius")->required();
  cover->add_option("--mode", cover_mode, "greedy|exact")->check(CLI::IsMember({"greedy", "exact"}));
  cover->add_option("--out", cover_out, "output CSV (default stdout)");
  cover->callback([&] {
    action = [&] {
      const auto rs = resolve_space(cover_space, optional_kernel(cover_kernel));
      const CoverResult c =
          cover_mode == "exact" ? brute_force_min_cover(rs.space, cover_eps) : greedy_cover(rs.space, cover_eps);
      emit(cover_out, out, [&](std::ostream& o) { write_cover_csv(o, c); });
      return kExitOk;
    };
  });

  // tree build
  auto* tree_cmd = app.add_subcommand("tree", "chaining tree operations");
  tree_cmd->require_subcommand(1);
  auto* build = tree_cmd->add_subcommand("build", "build (and prune) a chaining tree");
  std::string tree_space, tree_kernel, tree_schedule = "geometric", tree_out;
  double tree_u = 2.0;
  int tree_shift = 1;
  build->add_option("--space", tree_space, "space file or generator")->required();
  build->add_option("--kernel", tree_kernel, "use the kernel's canonical metric");
  build->add_option("--schedule", tree_schedule, "geometric|entropy")->check(CLI::IsMember({"geometric", "entropy"}));
  build->add_option("--u", tree_u, "pruning level (geometric schedule)");
  build->add_option("--shift", tree_shift, "epsilon_h = diam 2^{-h-shift}");
  build->add_option("--out", tree_out, "tree file (default stdout)");
  build->callback([&] {
    action = [&] {
      const auto rs = resolve_space(tree_space, optional_kernel(tree_kernel));
      const auto schedule = parse_schedule(tree_schedule);
      ChainingTree t = build_forward(rs.space, schedule, tree_shift);
      if (schedule == CapacitySchedule::kGeometric) t = prune_backward(t, rs.space, tree_u);
      const auto v = validate_tree(t, rs.space);
      emit(tree_out, out, [&](std::ostream& o) { write_tree(o, t); });
      for (const auto& w : v.capacity_warnings) err << "warning: " << w << '\n';
      for (const auto& f : v.failures) err << "invalid tree: " << f << '\n';
      return v.ok() ? kExitOk : kExitValidationFailed;
    };
  });

  // optimize
  auto* opt = app.add_subcommand("optimize", "run chaining GP-UCB on one sampled (or live) objective");
  std::string opt_space, opt_kernel = "se:ls=0.2", opt_rule = "halflog2", opt_schedule = "geometric", opt_out,
                          opt_obs, opt_objective = "gp";
  OptimizerConfig oc;
  int opt_channels = 1;
  bool opt_live = false;
  opt->add_option("--space", opt_space, "space file or generator")->required();
  opt->add_option("--kernel", opt_kernel, "kernel spec");
  opt->add_option("--u", oc.u, "confidence parameter");
  opt->add_option("--a", oc.a, "zeta exponent (> 1)");
  opt->add_option("--eta2", oc.eta2, "noise variance");
  opt->add_option("--t", oc.t_max, "number of queries");
  opt->add_option("--depth-rule", opt_rule, "halflog2|omega")->check(CLI::IsMember({"halflog2", "omega"}));
  opt->add_option("--schedule", opt_schedule, "geometric|entropy")->check(CLI::IsMember({"geometric", "entropy"}));
  opt->add_option("--seed", oc.seed, "seed for the sampled objective and noise");
  opt->add_option("--objective", opt_objective, "gp|squared_gp")->check(CLI::IsMember({"gp", "squared_gp"}));
  opt->add_option("--channels", opt_channels, "squared-GP channel count");
  opt->add_flag("--live", opt_live, "print each query to stdout and read its observation from stdin");
  opt->add_option("--out", opt_out, "regret CSV (default stdout)");
  opt->add_option("--observations", opt_obs, "observation log CSV");
  opt->callback([&] {
    action = [&] {
      oc.depth_rule = parse_depth_rule(opt_rule);
      oc.schedule = parse_schedule(opt_schedule);
      oc.validate();
      const Kernel kernel = parse_kernel(opt_kernel);
      const bool squared = opt_objective == "squared_gp";
      if (squared && opt_live) throw ArgumentError("live mode supports the gp objective only");
      if (opt_channels < 1) throw ArgumentError("channels must be at least 1");
      const auto rs = resolve_space(opt_space, squared ? squared_gp_rule(kernel) : kernel_canonical_rule(kernel));
      if (!rs.cloud) throw ArgumentError("optimize needs point coordinates, not a distance matrix");
      const auto model = squared ? SmoothnessModel::squared_gp(opt_channels, kernel.variance) : SmoothnessModel::gaussian();
      const ChainingTree tree = build_search_tree(rs.space, oc.schedule, oc.u);
      const auto omega = omega_table(tree, rs.space, oc.u, oc.a, model);
      const Eigen::MatrixXd cov = gram_matrix(kernel, *rs.cloud);
      RegretRecord rec;
      if (opt_live) {
        const std::string regret_path = opt_out.empty() ? "" : opt_out;
        rec = run_gp_ucb_live(cov, tree, omega, oc, [&](PointId x) {
          out << x << std::endl;
          double y = 0.0;
          if (!(in >> y)) throw IoError("live mode: expected an observation for point " + std::to_string(x));
          return y;
        });
        if (!regret_path.empty()) emit(regret_path, out, [&](std::ostream& o) { write_regret_csv(o, rec); });
      } else {
        const PriorSampler sampler(cov);
        Rng rng = make_stream(oc.seed, 0);
        if (squared) {
          std::vector<std::vector<double>> truth;
          for (int j = 0; j < opt_channels; ++j) {
            const Eigen::VectorXd g = sampler.draw(rng);
            truth.emplace_back(g.data(), g.data() + g.size());
          }
          rec = run_squared_gp_ucb(cov, tree, omega, oc, truth);
        } else {
          const Eigen::VectorXd f = sampler.draw(rng);
          rec = run_gp_ucb(cov, tree, omega, oc, std::vector<double>(f.data(), f.data() + f.size()));
        }
        emit(opt_out, out, [&](std::ostream& o) { write_regret_csv(o, rec); });
      }
      if (!opt_obs.empty()) emit(opt_obs, out, [&](std::ostream& o) { write_observation_log(o, rec); });
      return kExitOk;
    };
  });

  // validation suites
  SuiteOptions upper_opts, lower_opts, lemma_opts;
  auto* vu = app.add_subcommand("validate-upper", "Monte Carlo check of the chaining upper bound");
  upper_opts.attach(vu);
  vu->callback([&] { action = [&] { return report_exit(validate_upper(upper_opts.resolve()), upper_opts.out, out, err); }; });
  auto* vl = app.add_subcommand("validate-lower", "Monte Carlo check of the pruning lower bound");
  lower_opts.attach(vl);
  vl->callback([&] { action = [&] { return report_exit(validate_lower(lower_opts.resolve()), lower_opts.out, out, err); }; });
  auto* vm = app.add_subcommand("validate-lemmas", "Monte Carlo checks of the tail and anti-concentration lemmas");
  lemma_opts.attach(vm);
  vm->callback([&] { action = [&] { return report_exit(validate_lemmas(lemma_opts.resolve()), lemma_opts.out, out, err); }; });

  // bench
  auto* bench = app.add_subcommand("bench", "time tree construction across space sizes");
  std::vector<std::size_t> bench_sizes{256, 512, 1024};
  int bench_repeats = 3;
  std::uint64_t bench_seed = 0;
  std::string bench_out;
  bench->add_option("--sizes", bench_sizes, "space sizes")->delimiter(',');
  bench->add_option("--repeats", bench_repeats, "repeats per size (minimum is reported)");
  bench->add_option("--seed", bench_seed, "seed for the point sets");
  bench->add_option("--out", bench_out, "output CSV (default stdout)");
  bench->callback([&] {
    action = [&] {
      const auto rows = bench_tree_build(bench_sizes, bench_repeats, bench_seed);
      emit(bench_out, out, [&](std::ostream& o) {
        o << "n,seconds,depth,nodes\n";
        for (const auto& r : rows) o << r.n << ',' << format_real(r.seconds) << ',' << r.depth << ',' << r.nodes << '\n';
      });
      return kExitOk;
    };
  });

  // run
  auto* run = app.add_subcommand("run", "run a configured experiment over replicates");
  std::string run_config;
  run->add_option("--config", run_config, "config file")->required();
  run->callback([&] {
    action = [&] {
      const auto result = run_experiment(parse_config(run_config));
      for (const auto& f : result.files) out << f << '\n';
      for (const auto& r : result.report.rows) {
        if (!r.pass) err << "FAIL " << r.claim << '\n';
      }
      return result.report.all_pass() ? kExitOk : kExitValidationFailed;
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, out, err);
    return rc == 0 ? kExitOk : kExitUsage;
  }
  try {
    code = action ? action() : kExitUsage;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ArgumentError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const CapacityError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const NumericError& e) {
    err << "numeric error: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const InternalError& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitNumeric;
  }
  return code;
}

}  // namespace chainbandit
