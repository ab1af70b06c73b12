# Copyright 2026 The Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import math

import numpy as np
import pytest

import chainbandit as cb


def test_cover_on_a_line():
  space = cb.MetricSpace.from_points(np.arange(5.0).reshape(-1, 1))
  cover = cb.greedy_cover(space, 1.0)
  assert cover.centers == [1, 3]
  assert len(cb.min_cover(space, 1.0).centers) == 2
  assert cb.is_valid_cover(space, cover)
  assert space.diameter == 4.0


def test_errors_map_to_python_exceptions():
  space = cb.MetricSpace.from_points(np.zeros((3, 1)) + np.arange(3.0).reshape(-1, 1))
  with pytest.raises(ValueError):
    cb.greedy_cover(space, 0.0)
  with pytest.raises(ValueError):
    cb.MetricSpace.from_matrix(np.array([[0.0, 1.0], [2.0, 0.0]]))
  with pytest.raises(ValueError, match="a must exceed 1"):
    cb.OptimizerConfig(a=1.0)
  with pytest.raises(ValueError):
    cb.Kernel("rbf:ls=1")


def test_posterior_against_numpy():
  k = cb.Kernel("se:ls=0.3")
  rng = np.random.default_rng(0)
  x = rng.uniform(size=(12, 2))
  y = rng.normal(size=12)
  post = cb.GPPosterior(k, 0.05, x, list(y))
  gram = cb.gram_matrix(k, x)
  z = np.array([0.4, 0.6])
  kx = np.array([k(list(xi), list(z)) for xi in x])
  c = gram + 0.05 * np.eye(12)
  mu = kx @ np.linalg.solve(c, y)
  var = 1.0 - kx @ np.linalg.solve(c, kx)
  got_mu, got_sigma = post.predict(list(z))
  assert got_mu == pytest.approx(mu, abs=1e-8)
  assert got_sigma**2 == pytest.approx(var, abs=1e-8)
  sign, logdet = np.linalg.slogdet(np.eye(12) + gram / 0.05)
  assert cb.information_gain(gram, 0.05) == pytest.approx(0.5 * logdet, rel=1e-9)


def test_tree_and_optimizer_round():
  k = cb.Kernel("se:ls=0.2")
  pts = cb.generate_points("grid(1,32,1)")
  space = cb.MetricSpace.from_points(pts, k)
  tree = cb.build_search_tree(space, cb.CapacitySchedule.GEOMETRIC, 2.0)
  assert cb.validate_tree(tree, space) == []
  omega = cb.omega_table(tree, space, 2.0, 2.0, cb.SmoothnessModel.gaussian())
  assert len(omega) == tree.max_depth + 1
  cov = cb.gram_matrix(k, pts)
  truth = list(np.random.default_rng(1).multivariate_normal(np.zeros(32), cov + 1e-10 * np.eye(32)))
  rows = cb.run_gp_ucb(cov, tree, omega, cb.OptimizerConfig(t_max=30, seed=4), truth)
  assert len(rows) == 30
  for t, r in enumerate(rows, start=1):
    assert r["simple_regret"] <= r["cum_regret"] / t + 1e-12
    assert r["cum_regret"] <= r["bound"]


def test_star_pruning():
  space = cb.MetricSpace.resolve("star(50)")
  tree = cb.prune_backward(cb.build_forward(space), space, 1.0)
  assert tree.restart_count == 1
  assert tree.pruned_node_count == 2
  assert cb.validate_tree(tree, space) == []
  assert tree.to_csv().startswith("# space_size=51")


def test_live_mode_calls_back():
  k = cb.Kernel("matern32:ls=0.3")
  pts = cb.generate_points("grid(1,10,1)")
  space = cb.MetricSpace.from_points(pts, k)
  tree = cb.build_search_tree(space, cb.CapacitySchedule.ENTROPY, 2.0)
  omega = cb.omega_table(tree, space, 2.0, 2.0, cb.SmoothnessModel.gaussian())
  seen = []

  def observe(x):
    seen.append(x)
    return math.sin(x)

  rows = cb.run_gp_ucb_live(cb.gram_matrix(k, pts), tree, omega, cb.OptimizerConfig(t_max=6), observe)
  assert [r["point"] for r in rows] == seen
  assert all(math.isnan(r["cum_regret"]) for r in rows)


def test_numeric_helpers():
  assert cb.zeta(2.0) == pytest.approx(math.pi**2 / 6, abs=1e-10)
  assert cb.c_eta(1.0) == pytest.approx(2 / math.log(2))
  lo, hi = cb.squared_gp_bounds(1.0, 0.5, 2.0, 4)
  assert lo == 0.0
  assert hi == pytest.approx(5.295566962655021, rel=1e-12)
  report, ok = cb.validate_lemmas(draws=5000)
  assert ok
  assert report.startswith("claim,")


def test_run_config(tmp_path):
  files, report, _ = cb.run_config(f"space = grid(1,12,1)\nt_max = 10\nreplicates = 2\noutput_dir = {tmp_path}\n")
  assert (tmp_path / "aggregate.csv").exists()
  assert "regret_bound" in report
  with pytest.raises(ValueError):
    cb.run_config("colour = red\n")
