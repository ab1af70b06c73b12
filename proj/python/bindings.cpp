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

#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <sstream>

#include "chainbandit/bandit.hpp"
#include "chainbandit/chaining.hpp"
#include "chainbandit/errors.hpp"
#include "chainbandit/gp.hpp"
#include "chainbandit/harness.hpp"
#include "chainbandit/io.hpp"
#include "chainbandit/kernel.hpp"
#include "chainbandit/metric.hpp"
#include "chainbandit/smoothness.hpp"

namespace py = pybind11;
using namespace chainbandit;

namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

PointCloud to_cloud(const Eigen::Ref<const RowMatrix>& x) {
  std::vector<double> flat(x.data(), x.data() + x.size());
  return PointCloud(static_cast<std::size_t>(x.cols()), std::move(flat));
}

RowMatrix from_cloud(const PointCloud& c) {
  RowMatrix m(c.size(), c.dim());
  std::copy(c.data().begin(), c.data().end(), m.data());
  return m;
}

py::dict row_dict(const RegretRow& r) {
  py::dict d;
  d["iter"] = r.iter;
  d["depth"] = r.depth;
  d["u_i"] = r.u_i;
  d["point"] = r.point;
  d["ucb"] = r.ucb;
  d["y"] = r.y;
  d["inst_regret"] = r.inst_regret;
  d["cum_regret"] = r.cum_regret;
  d["simple_regret"] = r.simple_regret;
  d["width"] = r.width;
  d["omega"] = r.omega;
  d["prior_variance"] = r.prior_variance;
  d["covered"] = r.covered;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Chaining-based GP bandit optimization over finite metric spaces.";

  auto base = py::register_exception<ArgumentError>(m, "ArgumentError", PyExc_ValueError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<CapacityError>(m, "CapacityError", PyExc_OverflowError);
  py::register_exception<NumericError>(m, "NumericError", PyExc_ArithmeticError);
  py::register_exception<InternalError>(m, "InternalError", PyExc_RuntimeError);
  py::register_exception<IoError>(m, "IoError", PyExc_OSError);
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  (void)base;

  // Kernels
  py::enum_<KernelFamily>(m, "KernelFamily")
      .value("SQUARED_EXPONENTIAL", KernelFamily::kSquaredExponential)
      .value("MATERN12", KernelFamily::kMatern12)
      .value("MATERN32", KernelFamily::kMatern32)
      .value("MATERN52", KernelFamily::kMatern52)
      .value("LINEAR", KernelFamily::kLinear);
  py::class_<Kernel>(m, "Kernel")
      .def(py::init([](const std::string& spec) { return parse_kernel(spec); }), py::arg("spec"))
      .def_readonly("family", &Kernel::family)
      .def_readonly("lengthscale", &Kernel::lengthscale)
      .def_readonly("variance", &Kernel::variance)
      .def("__call__", [](const Kernel& k, const std::vector<double>& x, const std::vector<double>& y) {
        return kernel_eval(k, x, y);
      })
      .def("__repr__", [](const Kernel& k) { return "Kernel('" + format_kernel(k) + "')"; })
      .def("__str__", &format_kernel);
  m.def("gram_matrix", [](const Kernel& k, const Eigen::Ref<const RowMatrix>& x) { return gram_matrix(k, to_cloud(x)); },
        py::arg("kernel"), py::arg("points"));

  // Metric spaces and covers
  py::class_<FiniteMetricSpace>(m, "MetricSpace")
      .def_static(
          "from_points",
          [](const Eigen::Ref<const RowMatrix>& x, std::optional<Kernel> kernel) {
            return FiniteMetricSpace::from_points(to_cloud(x), kernel ? kernel_canonical_rule(*kernel) : euclidean_rule());
          },
          py::arg("points"), py::arg("kernel") = std::nullopt)
      .def_static(
          "from_matrix",
          [](const Eigen::Ref<const RowMatrix>& d) {
            if (d.rows() != d.cols()) throw ArgumentError("distance matrix must be square");
            return FiniteMetricSpace::from_matrix(static_cast<std::size_t>(d.rows()),
                                                  std::vector<double>(d.data(), d.data() + d.size()));
          },
          py::arg("matrix"))
      .def_static(
          "resolve",
          [](const std::string& source, std::optional<Kernel> kernel) { return resolve_space(source, kernel).space; },
          py::arg("source"), py::arg("kernel") = std::nullopt)
      .def("__len__", &FiniteMetricSpace::size)
      .def_property_readonly("diameter", &FiniteMetricSpace::diameter)
      .def("distance", &FiniteMetricSpace::distance, py::arg("i"), py::arg("j"))
      .def_property_readonly("points", [](const FiniteMetricSpace& s) -> py::object {
        if (!s.has_points()) return py::none();
        return py::cast(from_cloud(s.points()));
      });
  m.def("generate_points", [](const std::string& e) { return from_cloud(generate_points(e)); }, py::arg("expression"));

  py::class_<CoverResult>(m, "Cover")
      .def_readonly("centers", &CoverResult::centers)
      .def_readonly("radius", &CoverResult::radius)
      .def_readonly("covered_by", &CoverResult::covered_by);
  m.def("greedy_cover", py::overload_cast<const FiniteMetricSpace&, double>(&greedy_cover), py::arg("space"),
        py::arg("eps"));
  m.def("min_cover", &brute_force_min_cover, py::arg("space"), py::arg("eps"));
  m.def(
      "is_valid_cover",
      [](const FiniteMetricSpace& s, const CoverResult& c, const std::vector<PointId>& subset) {
        return is_valid_cover(s, c, subset);
      },
      py::arg("space"), py::arg("cover"), py::arg("subset") = std::vector<PointId>{});
  m.def(
      "metric_entropy",
      [](const FiniteMetricSpace& s, double eps, bool exact) {
        return metric_entropy(s, eps, exact ? EntropyMode::kExact : EntropyMode::kGreedy);
      },
      py::arg("space"), py::arg("eps"), py::arg("exact") = false);

  // Smoothness
  py::class_<SmoothnessModel>(m, "SmoothnessModel")
      .def_static("gaussian", &SmoothnessModel::gaussian)
      .def_static("sub_gamma", &SmoothnessModel::sub_gamma, py::arg("nu"), py::arg("c"))
      .def_static("squared_gp", &SmoothnessModel::squared_gp, py::arg("channels"), py::arg("kappa"))
      .def("__repr__", &SmoothnessModel::describe);
  m.def("ell_u", &ell_u, py::arg("model"), py::arg("u"), py::arg("dist"));
  m.def("zeta", &zeta, py::arg("a"));
  m.def("confidence_level", &confidence_level_u_i, py::arg("u"), py::arg("n_h"), py::arg("i"), py::arg("a"));

  // GP
  py::class_<GPPosterior>(m, "GPPosterior")
      .def(py::init<Kernel, double>(), py::arg("kernel"), py::arg("eta2"))
      .def(py::init([](const Kernel& k, double eta2, const Eigen::Ref<const RowMatrix>& x, const std::vector<double>& y) {
             return GPPosterior(k, eta2, to_cloud(x), y);
           }),
           py::arg("kernel"), py::arg("eta2"), py::arg("inputs"), py::arg("outputs"))
      .def(
          "predict",
          [](const GPPosterior& p, const std::vector<double>& x) {
            const auto r = p.predict(x);
            return py::make_tuple(r.mu, r.sigma);
          },
          py::arg("x"), "Posterior mean and standard deviation at x.")
      .def("update", [](const GPPosterior& p, const std::vector<double>& x, double y) { return p.update(x, y); },
           py::arg("x"), py::arg("y"))
      .def("__len__", &GPPosterior::size);
  m.def("information_gain", py::overload_cast<const Eigen::MatrixXd&, double>(&information_gain), py::arg("gram"),
        py::arg("eta2"));
  m.def(
      "gamma_t",
      [](const Eigen::MatrixXd& cov, std::size_t t, double eta2, bool exact) {
        return gamma_t(cov, t, eta2, exact ? GammaMode::kExact : GammaMode::kGreedy);
      },
      py::arg("prior_covariance"), py::arg("t"), py::arg("eta2"), py::arg("exact") = false);
  m.def("c_eta", &c_eta, py::arg("eta2"));
  m.def(
      "squared_gp_bounds",
      [](double mu, double sigma, double u, int channels) {
        const auto iv = squared_gp_bounds(mu, sigma, u, channels);
        return py::make_tuple(iv.lower, iv.upper);
      },
      py::arg("mu"), py::arg("sigma"), py::arg("u"), py::arg("channels"));

  // Chaining trees
  py::enum_<CapacitySchedule>(m, "CapacitySchedule")
      .value("GEOMETRIC", CapacitySchedule::kGeometric)
      .value("ENTROPY", CapacitySchedule::kEntropy);
  py::class_<TreeNode>(m, "TreeNode")
      .def_readonly("id", &TreeNode::id)
      .def_readonly("depth", &TreeNode::depth)
      .def_readonly("location", &TreeNode::location)
      .def_property_readonly("parent", [](const TreeNode& n) -> py::object {
        return n.parent == kNoNode ? py::none() : py::cast(n.parent);
      })
      .def_readonly("pruned", &TreeNode::pruned)
      .def_readonly("radius", &TreeNode::radius)
      .def_readonly("value", &TreeNode::value);
  py::class_<ChainingTree>(m, "ChainingTree")
      .def("__len__", &ChainingTree::size)
      .def_property_readonly("nodes", &ChainingTree::nodes)
      .def_property_readonly("max_depth", &ChainingTree::max_depth)
      .def_property_readonly("restart_count", &ChainingTree::restart_count)
      .def_property_readonly("pruned_node_count", &ChainingTree::pruned_node_count)
      .def_property_readonly("epsilon", &ChainingTree::epsilon_schedule)
      .def_property_readonly("capacity", &ChainingTree::capacity_schedule)
      .def("children", [](const ChainingTree& t, NodeId id) {
        const auto c = t.children(id);
        return std::vector<NodeId>(c.begin(), c.end());
      })
      .def("leaf_of", &ChainingTree::leaf_of)
      .def("to_csv", [](const ChainingTree& t) {
        std::ostringstream out;
        write_tree(out, t);
        return out.str();
      });
  m.def("build_forward", &build_forward, py::arg("space"), py::arg("schedule") = CapacitySchedule::kGeometric,
        py::arg("epsilon_shift") = 1);
  m.def("prune_backward", &prune_backward, py::arg("tree"), py::arg("space"), py::arg("u"));
  m.def("build_search_tree", &build_search_tree, py::arg("space"), py::arg("schedule"), py::arg("u"));
  m.def(
      "validate_tree", [](const ChainingTree& t, const FiniteMetricSpace& s) { return validate_tree(t, s).failures; },
      py::arg("tree"), py::arg("space"), "List of invariant violations; empty when the tree is valid.");
  m.def("omega_table", &omega_table, py::arg("tree"), py::arg("space"), py::arg("u"), py::arg("a"), py::arg("model"),
        py::arg("majorized") = false);

  // Bandit
  py::enum_<DepthRule>(m, "DepthRule")
      .value("HALF_LOG2", DepthRule::kHalfLog2)
      .value("OMEGA_THRESHOLD", DepthRule::kOmegaThreshold);
  py::class_<OptimizerConfig>(m, "OptimizerConfig")
      .def(py::init([](double u, double a, double eta2, std::size_t t_max, DepthRule rule, std::uint64_t seed) {
             OptimizerConfig c;
             c.u = u;
             c.a = a;
             c.eta2 = eta2;
             c.t_max = t_max;
             c.depth_rule = rule;
             c.seed = seed;
             c.validate();
             return c;
           }),
           py::arg("u") = 2.0, py::arg("a") = 2.0, py::arg("eta2") = 0.01, py::arg("t_max") = 100,
           py::arg("depth_rule") = DepthRule::kHalfLog2, py::arg("seed") = 0)
      .def_readonly("u", &OptimizerConfig::u)
      .def_readonly("a", &OptimizerConfig::a)
      .def_readonly("eta2", &OptimizerConfig::eta2)
      .def_readonly("t_max", &OptimizerConfig::t_max)
      .def_readonly("seed", &OptimizerConfig::seed);
  m.def(
      "run_gp_ucb",
      [](const Eigen::MatrixXd& cov, const ChainingTree& tree, const std::vector<double>& omega,
         const OptimizerConfig& cfg, const std::vector<double>& truth) {
        const auto rec = run_gp_ucb(cov, tree, omega, cfg, truth);
        const auto bound = regret_bound_rhs(rec, cov, cfg);
        py::list rows;
        for (std::size_t k = 0; k < rec.rows.size(); ++k) {
          py::dict d = row_dict(rec.rows[k]);
          d["bound"] = bound.chaining[k];
          rows.append(d);
        }
        return rows;
      },
      py::arg("prior_covariance"), py::arg("tree"), py::arg("omega"), py::arg("config"), py::arg("truth"),
      "Runs the optimizer against a known truth; one dict per iteration.");
  m.def(
      "run_gp_ucb_live",
      [](const Eigen::MatrixXd& cov, const ChainingTree& tree, const std::vector<double>& omega,
         const OptimizerConfig& cfg, const std::function<double(PointId)>& observe) {
        py::list rows;
        for (const auto& r : run_gp_ucb_live(cov, tree, omega, cfg, observe).rows) rows.append(row_dict(r));
        return rows;
      },
      py::arg("prior_covariance"), py::arg("tree"), py::arg("omega"), py::arg("config"), py::arg("observe"));

  // Experiments
  m.def(
      "run_config",
      [](const std::string& text) {
        const auto res = run_experiment(parse_config_text(text));
        std::ostringstream out;
        write_validation_report(out, res.report);
        return py::make_tuple(res.files, out.str(), res.report.all_pass());
      },
      py::arg("config_text"), "Runs an experiment from config text; returns (files, report_csv, all_pass).");
  m.def(
      "validate_lemmas",
      [](std::size_t draws, std::uint64_t seed) {
        ExperimentConfig c;
        c.draws = draws;
        c.seed = seed;
        std::ostringstream out;
        const auto rep = validate_lemmas(c);
        write_validation_report(out, rep);
        return py::make_tuple(out.str(), rep.all_pass());
      },
      py::arg("draws") = 100000, py::arg("seed") = 0);
}
