import math

import numpy as np
import pytest

from polydist import bounds as bd
from polydist.errors import InfeasibleConstruction, PreconditionError
from polydist.fixtures import example1, example2
from polydist.matpoly import WeightSet

from helpers import planted, random_poly, random_targets, random_weights


@pytest.fixture(scope="module")
def ex1_report():
    pr = example1()
    return bd.optimize_bounds(pr.P, pr.targets, pr.weights, pr.gamma_range, "min-upper")


def _bisect_derivative(df, a, b, iters=200):
    for _ in range(iters):
        c = 0.5 * (a + b)
        if df(c) > 0:
            b = c
        else:
            a = c
    return 0.5 * (a + b)


def test_minimize_scalar_quadratic():
    res = bd.minimize_scalar(lambda x: (x - 2.0) ** 2, 0.0, 5.0)
    assert res.converged
    assert res.x == pytest.approx(2.0, abs=1e-6)


def test_minimize_scalar_against_bisection_oracle():
    f = lambda x: math.exp(x) - 3 * x + math.sin(2 * x)
    df = lambda x: math.exp(x) - 3 + 2 * math.cos(2 * x)
    res = bd.minimize_scalar(f, 0.5, 2.0, tol=1e-10)
    assert res.x == pytest.approx(_bisect_derivative(df, 0.5, 2.0), abs=1e-6)


def test_minimize_scalar_handles_inf_and_boundary():
    f = lambda x: math.inf if x < 1 else x
    res = bd.minimize_scalar(f, 0.0, 3.0, tol=1e-10)
    assert res.x == pytest.approx(1.0, abs=1e-4)
    with pytest.raises(PreconditionError):
        bd.minimize_scalar(f, 1.0, 1.0)


def test_log_grid():
    g = bd.log_grid(0.0, 10.0, 5)
    assert g[0] == bd.GAMMA_FLOOR and g[-1] == 10.0
    assert np.all(np.diff(np.log(g)) > 0)
    assert bd.log_grid(1, 2, 1).tolist() == [2.0]


def test_pointwise_bounds_example2():
    pr = example2()
    low = bd.beta_low(pr.P, pr.targets, pr.weights, 2.5730)
    up, res = bd.beta_up(pr.P, pr.targets, pr.weights, 2.5730)
    assert low == pytest.approx(6.4007e-4, abs=1e-5)
    assert up == pytest.approx(8.6167e-4, abs=2e-5)
    assert low <= 6.9e-4 <= up
    assert res.gamma == 2.5730


def test_gamma_must_be_positive():
    pr = example1()
    with pytest.raises(PreconditionError):
        bd.beta_low(pr.P, pr.targets, pr.weights, 0.0)


def test_sweep_is_deterministic_and_matches_pointwise():
    pr = example1()
    gammas = [0.5, 1.0, 3.0]
    a = bd.sweep(pr.P, pr.targets, pr.weights, gammas)
    b = bd.sweep(pr.P, pr.targets, pr.weights, gammas)
    assert a == b
    one = bd.sweep(pr.P, pr.targets, pr.weights, [1.0])[0]
    assert one.beta_low == bd.beta_low(pr.P, pr.targets, pr.weights, 1.0)
    assert one.beta_up == bd.beta_up(pr.P, pr.targets, pr.weights, 1.0)[0]


def test_example1_min_upper(ex1_report):
    assert ex1_report.beta_up_opt == pytest.approx(1.0090, abs=1e-2)
    assert ex1_report.gamma_up == pytest.approx(1.9656, abs=5e-2)
    assert ex1_report.beta_low_opt == pytest.approx(0.1320, abs=1e-3)
    assert ex1_report.q0.bound == pytest.approx(12.5337, abs=1e-2)
    assert ex1_report.q_best.gamma == ex1_report.gamma_up


def test_example1_max_lower_agrees(ex1_report):
    pr = example1()
    rep = bd.optimize_bounds(pr.P, pr.targets, pr.weights, pr.gamma_range, "max-lower", grid=60)
    assert rep.beta_low_opt == pytest.approx(ex1_report.beta_low_opt, abs=1e-3)
    assert rep.beta_up_opt == pytest.approx(ex1_report.beta_up_opt, abs=1e-3)


def test_example2_min_gap():
    pr = example2()
    rep = bd.optimize_bounds(pr.P, pr.targets, pr.weights, pr.gamma_range, "min-gap", grid=80)
    assert rep.gamma_up == rep.gamma_low
    assert rep.gamma_up == pytest.approx(2.5730, abs=5e-2)
    assert rep.beta_low_opt <= 6.9e-4 <= rep.beta_up_opt
    assert rep.beta_up_opt == pytest.approx(8.6167e-4, abs=2e-5)


def test_planted_bounds_collapse(rng):
    P, T = planted(rng, 3, 2, 2)
    w = WeightSet.coefficient_norms(P)
    rep = bd.optimize_bounds(P, T, w, (0, 10), grid=30)
    assert rep.beta_low_opt <= 1e-8
    assert rep.beta_up_opt == 0.0


def test_unknown_strategy():
    pr = example1()
    with pytest.raises(PreconditionError):
        bd.optimize_bounds(pr.P, pr.targets, pr.weights, strategy="best")


def test_sandwich_random(rng):
    for _ in range(10):
        n = int(rng.integers(2, 5))
        m = int(rng.integers(1, 4))
        k = int(rng.integers(1, n + 1))
        P = random_poly(rng, n, m)
        T = random_targets(rng, k)
        w = random_weights(rng, m)
        samples = bd.sweep(P, T, w, bd.log_grid(0.05, 10, 12))
        lows = [s.beta_low for s in samples]
        ups = [s.beta_up for s in samples if s.feasible]
        if ups:
            assert max(lows) <= min(ups) * (1 + 1e-9)


def test_lower_bound_below_planted_perturbation(rng):
    # P = Q - E with Sigma in spec(Q) and ||E_j|| <= eps w_j, so D_w(P) <= eps
    for _ in range(10):
        Q, T = planted(rng, 3, 2, 2)
        E = [rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3)) for _ in range(3)]
        w = random_weights(rng, 2)
        eps = max(np.linalg.norm(Ej, 2) / wj for Ej, wj in zip(E, w.weights))
        P = type(Q)(tuple(Qj - Ej for Qj, Ej in zip(Q.coeffs, E)))
        for g in rng.uniform(0.01, 10, 5):
            assert bd.beta_low(P, T, w, g) <= eps + 1e-9


def test_doubling_grid_keeps_shared_points():
    pr = example1()
    coarse = bd.sweep(pr.P, pr.targets, pr.weights, np.linspace(1, 9, 5))
    fine = bd.sweep(pr.P, pr.targets, pr.weights, np.linspace(1, 9, 9))
    assert coarse == fine[::2]


def test_example2_other_target_order():
    # the bounds depend on the order of the targets; this order still brackets the true distance
    from polydist.fixtures import frank_problem

    pr = frank_problem(12, targets=(0.1, -0.1, 0.1j, -0.1j))
    low = bd.beta_low(pr.P, pr.targets, pr.weights, 2.5730)
    up, res = bd.beta_up(pr.P, pr.targets, pr.weights, 2.5730)
    assert low == pytest.approx(6.4007e-4, abs=1e-5)
    assert low <= 6.9e-4 <= up
    assert np.min(np.abs(np.linalg.eigvals(-res.Q.coeffs[0]) - 0.1)) <= 1e-6
