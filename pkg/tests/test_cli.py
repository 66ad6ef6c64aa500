import json
from fractions import Fraction

import numpy as np
import pytest

from polydist import cli, fixtures
from polydist import problemfile as pf
from polydist.matpoly import WeightSet
from polydist.perturb import build_q0

from helpers import planted


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def planted_file(tmp_path, rng):
    P, T = planted(rng, 3, 2, 2)
    problem = pf.Problem(P, T, WeightSet.coefficient_norms(P), "norms", None, None, None)
    path = tmp_path / "planted.json"
    path.write_text(pf.dumps(problem))
    return path


def test_bounds_example1(capsys):
    code, out, err = run(capsys, "bounds", "fixture:example1", "--grid", "60")
    assert code == cli.EXIT_OK and err == ""
    doc = json.loads(out)
    assert doc["beta_up_opt"] == pytest.approx(1.0090, abs=1e-2)
    assert doc["beta_low_opt"] == pytest.approx(0.1320, abs=1e-3)
    assert doc["q0_bound"] == pytest.approx(12.5337, abs=1e-2)


def test_bounds_example2(capsys):
    code, out, _ = run(capsys, "bounds", "fixture:example2", "--grid", "60")
    doc = json.loads(out)
    assert code == 0 and doc["strategy"] == "min-gap"
    assert doc["gamma_up"] == pytest.approx(2.5730, abs=5e-2)
    assert doc["beta_low_opt"] == pytest.approx(6.4007e-4, abs=1e-5)
    assert doc["beta_up_opt"] == pytest.approx(8.6167e-4, abs=2e-5)


def test_bounds_human_uses_four_decimals(capsys):
    code, out, _ = run(capsys, "bounds", "fixture:example2", "--grid", "40", "--human")
    assert code == 0
    assert "8.6167e-04" in out


def test_bounds_planted_are_zero(capsys, planted_file):
    code, out, _ = run(capsys, "bounds", str(planted_file), "--grid", "20")
    doc = json.loads(out)
    assert code == 0
    assert doc["beta_low_opt"] <= 1e-8 and doc["beta_up_opt"] == 0.0 and doc["q0_bound"] == 0.0


def test_sweep_rows_and_determinism(capsys):
    args = ("sweep", "fixture:example1", "--range", "0:10", "--points", "25")
    _, first, _ = run(capsys, *args)
    _, second, _ = run(capsys, *args)
    assert first == second
    lines = first.splitlines()
    assert lines[0] == "gamma,beta_low,beta_up,feasible"
    assert len(lines) == 26
    ups = [float(r.split(",")[2]) for r in lines[1:]]
    gammas = [float(r.split(",")[0]) for r in lines[1:]]
    assert 1.0 < gammas[int(np.argmin(ups))] < 4.0


def test_sweep_single_point_and_missing_upper(capsys, tmp_path):
    out = tmp_path / "s.csv"
    code, stdout, _ = run(capsys, "sweep", "fixture:example2", "--range", "0:1e-6", "--points", "1", "--out", str(out))
    assert code == 0 and stdout == ""
    rows = out.read_text().splitlines()
    assert len(rows) == 2
    gamma, low, up, feasible = rows[1].split(",")
    assert float(gamma) == 1e-6 and up == "" and feasible == "0"


def test_sweep_linear_excludes_zero(capsys):
    _, out, _ = run(capsys, "sweep", "fixture:example1", "--range", "0:10", "--points", "4", "--spacing", "linear")
    gammas = [float(r.split(",")[0]) for r in out.splitlines()[1:]]
    assert gammas == pytest.approx([2.5, 5.0, 7.5, 10.0])


def test_perturb_then_verify(capsys, tmp_path):
    q = tmp_path / "q.json"
    code, _, _ = run(capsys, "perturb", "fixture:example1", "--gamma", "1.9656", "--out", str(q))
    assert code == 0
    doc = json.loads(q.read_text())
    summary = doc["perturbation"]
    assert summary["bound"] == pytest.approx(1.0090, abs=1e-2)
    assert len(summary["delta_coefficients"]) == 3
    code, out, _ = run(capsys, "verify", str(q))
    assert code == cli.EXIT_OK and json.loads(out)["pass"]


def test_perturb_gamma0(capsys):
    code, out, _ = run(capsys, "perturb", "fixture:example1", "--gamma0")
    summary = json.loads(out)["perturbation"]
    assert code == 0 and summary["branch"] == "gamma0"
    assert summary["bound"] == pytest.approx(12.5337, abs=1e-2)
    D1, D2 = summary["delta_coefficients"][1:]
    assert not np.any(np.array(D1)) and not np.any(np.array(D2))


def test_perturb_planted_is_identity(capsys, planted_file):
    code, out, _ = run(capsys, "perturb", str(planted_file), "--gamma", "1.0")
    assert code == 0
    q = json.loads(out)
    original = json.loads(planted_file.read_text())
    assert q["coefficients"] == original["coefficients"]
    assert pf.to_text(q["coefficients"]) == pf.to_text(original["coefficients"])


def test_verify_foreign_targets_fail(capsys):
    code, out, err = run(capsys, "verify", "fixture:example1")
    doc = json.loads(out)
    assert code == cli.EXIT_VERIFY_FAILED and not doc["pass"]
    assert all(c["spectrum_gap"] > 1e-2 for c in doc["targets"])
    assert "verification failed" in err


def test_verify_explicit_targets(capsys):
    code, _, _ = run(capsys, "verify", "fixture:example1", "--targets", "[[76.9807, 0]]", "--tol", "1e-3")
    assert code == cli.EXIT_OK
    code, out, _ = run(capsys, "verify", "fixture:frank:1", "--targets", "[[1, 0]]")
    assert code == cli.EXIT_OK


def test_frank_perturb_verify_tight(capsys, tmp_path):
    q = tmp_path / "frank.json"
    assert run(capsys, "perturb", "fixture:example2", "--gamma", "2.5730", "--out", str(q))[0] == 0
    code, out, _ = run(capsys, "verify", str(q), "--tol", "1e-6")
    assert code == 0, out


def test_infeasible_gamma_names_hypothesis(capsys):
    code, out, err = run(capsys, "perturb", "fixture:example2", "--gamma", "1e-8")
    assert code == cli.EXIT_INFEASIBLE and out == ""
    assert "rank(V(gamma)) = k" in err


def test_input_errors(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"coefficients": [[[[1, 0]]], [[[1, 0]]]],\n "targets": [[1, 0, 3]]}')
    code, out, err = run(capsys, "bounds", str(bad))
    assert code == cli.EXIT_INPUT and out == ""
    assert "targets[0]" in err
    bad.write_text('{"coefficients": \n [}')
    code, _, err = run(capsys, "bounds", str(bad))
    assert code == cli.EXIT_INPUT and "line 2" in err
    assert run(capsys, "bounds", str(tmp_path / "missing.json"))[0] == cli.EXIT_INPUT


def test_usage_errors(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["sweep", "fixture:example1", "--range", "3:1", "--points", "2"])
    assert exc.value.code == cli.EXIT_USAGE
    with pytest.raises(SystemExit) as exc:
        cli.main(["perturb", "fixture:example1"])
    assert exc.value.code == cli.EXIT_USAGE


def test_weights_flag(capsys):
    _, out, _ = run(capsys, "perturb", "fixture:example1", "--gamma0", "--weights", "unit")
    doc = json.loads(out)
    assert doc["weights"] == "unit"
    pr = fixtures.example1()
    expected = build_q0(pr.P, pr.targets, WeightSet.unit(2)).bound
    assert doc["perturbation"]["bound"] == pytest.approx(expected, rel=1e-15)


@pytest.mark.parametrize("name", ["example1", "example2", "frank:3"])
def test_round_trip(name):
    text = pf.dumps(fixtures.by_name(name))
    once = pf.dumps(pf.loads(text))
    assert once == text
    assert pf.dumps(pf.loads(once)) == once


def test_fixture_command(capsys):
    code, out, _ = run(capsys, "fixture", "frank:1")
    doc = json.loads(out)
    assert code == 0
    assert doc["coefficients"] == [[[[-1.0, 0.0]]], [[[1.0, 0.0]]]]


def test_frank_matrix():
    assert fixtures.frank_matrix(1).tolist() == [[1]]
    F = fixtures.frank_matrix(12)
    assert F[11].tolist() == [0] * 10 + [1, 1]
    assert F[0].tolist() == list(range(12, 0, -1))
    assert F[1].tolist() == list(range(11, 0, -1))[:1] + list(range(11, 0, -1))
    assert np.linalg.det(F) == pytest.approx(1.0, rel=1e-6)
    assert _exact_det(F) == 1


def _exact_det(M):
    # fraction-exact Gaussian elimination; Frank matrices are badly conditioned for floating LU
    A = [[Fraction(int(x)) for x in row] for row in M]
    n, det = len(A), Fraction(1)
    for c in range(n):
        p = next(r for r in range(c, n) if A[r][c] != 0)
        if p != c:
            A[c], A[p] = A[p], A[c]
            det = -det
        det *= A[c][c]
        for r in range(c + 1, n):
            f = A[r][c] / A[c][c]
            A[r] = [a - f * b for a, b in zip(A[r], A[c])]
    return det
