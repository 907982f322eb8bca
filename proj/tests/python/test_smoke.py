import math

import numpy as np
import pytest

import sapg


def test_log_sum_exp_matches_numpy():
    v = np.array([0.3, -1.2, 2.5, 2.499])
    for mu in (1.0, 0.1, 0.013):
        expected = mu * np.log(np.sum(np.exp(v / mu)))
        assert sapg.log_sum_exp(v, mu) == pytest.approx(expected, rel=1e-13)


def test_softmax_weights_sum_to_one():
    w = sapg.softmax_weights(np.array([1.0, 0.0, -1.0]), 0.5)
    assert w.shape == (3,)
    assert np.all(w > 0)
    assert np.sum(w) == pytest.approx(1.0, abs=1e-14)


def test_sym_eig_diagonalizes():
    rng = np.random.default_rng(7)
    a = rng.normal(size=(6, 6))
    a = 0.5 * (a + a.T)
    w, vecs = sapg.sym_eig(a)
    assert np.all(np.diff(w) <= 1e-12)
    assert np.linalg.norm(vecs @ np.diag(w) @ vecs.T - a) <= 1e-10 * np.linalg.norm(a)


def test_projection_matches_cvx_style_oracle():
    lengths = np.array([1.0, 2.0])
    s = sapg.BoxBudgetSet(lengths, 1.0, 0.05)
    x, theta = s.project_with_multiplier(np.array([2.0, 0.06]))
    assert x == pytest.approx([0.9, 0.05], abs=1e-12)
    assert theta == pytest.approx(1.1, abs=1e-12)
    box, budget = s.residuals(x)
    assert box <= 1e-12 and budget <= 1e-12
    free = sapg.project_box_budget(lengths, 1.0, 0.05, np.array([0.2, 0.1]))
    assert free == pytest.approx([0.2, 0.1])


def test_invalid_projection_arguments_raise():
    with pytest.raises(ValueError):
        sapg.BoxBudgetSet(np.array([1.0, 1.0]), 0.01, 0.05)  # budget below the floor


def test_build_instance_and_gradients():
    cfg = sapg.InstanceConfig()
    cfg.cols, cfg.rows = 3, 2
    cfg.volume_budget = 0.01
    cfg.x_min = 1e-6
    problem = sapg.build_instance(cfg)
    assert problem.bar_count == 11
    assert problem.free_dof_count == 8
    assert problem.scenario_count == 2

    x = problem.uniform_design()
    mu = 0.1
    g = problem.grad(x, mu)
    assert g.shape == (11,)

    h = 1e-6 * float(np.max(x))
    fd = np.array([
        (problem.eval(x + h * e, mu) - problem.eval(x - h * e, mu)) / (2 * h)
        for e in np.eye(11)
    ])
    assert np.max(np.abs(g - fd) / np.maximum(np.abs(fd), 1e-9)) <= 1e-5

    L, Lprime, beta = problem.constants()
    assert beta == pytest.approx(math.log(2))
    assert L > 0 and Lprime >= 0


def test_solve_stays_feasible_and_descends():
    cfg = sapg.InstanceConfig()
    cfg.cols, cfg.rows = 3, 2
    cfg.volume_budget = 0.01
    cfg.x_min = 1e-6
    problem = sapg.build_instance(cfg)

    trace = sapg.solve(problem, algo="sapg", iters=150, L=1e5)
    assert len(trace) == 151
    assert not trace.breakdown
    assert max(trace.residual_box) <= 1e-10
    assert max(trace.residual_budget) <= 1e-10
    assert trace.best_f < trace.f_x[0]
    assert trace.best_f == pytest.approx(min(trace.f_x))

    sub = sapg.solve(problem, algo="subgrad", iters=50, subgrad_step_c=1e-6)
    assert sub.best_f <= sub.f_x[0]

    with pytest.raises(ValueError):
        sapg.solve(problem, algo="newton")


def test_rate_bound_decreases():
    vals = [sapg.rate_bound(k, 1.0, 1e5, 0.0, math.log(20), 0.2) for k in (1, 10, 100)]
    assert vals[0] > vals[1] > vals[2] > 0


def test_check_suite_passes_at_reduced_scale():
    cfg = sapg.InstanceConfig()
    cfg.cols, cfg.rows = 3, 2
    cfg.volume_budget = 0.01
    cfg.x_min = 1e-6
    problem = sapg.build_instance(cfg)
    passed, items = sapg.check_suite("project", problem, seed=3, scale=0.05)
    assert passed
    assert items and all(ok for _, ok, _, _ in items)
    assert set(sapg.suites) == {"grad", "project", "smoothing", "lyapunov"}
