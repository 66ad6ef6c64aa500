"""``polydist`` command line.

Exit codes: 0 success, 1 verification failed, 2 usage error, 3 bad input
(parse error or violated precondition), 4 construction infeasible,
5 numerical failure. Data goes to stdout, diagnostics to stderr.
"""
import argparse
import dataclasses
import sys

import numpy as np

from . import fixtures, problemfile as io
from .bounds import DEFAULT_GRID, DEFAULT_RANGE, STRATEGIES, log_grid, optimize_bounds, sweep
from .errors import InfeasibleConstruction, NumericalFailure, PolydistError
from .matpoly import WeightSet, evaluate, spectrum
from .numkernel import decompose
from .perturb import build_delta, build_q0

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_USAGE = 2
EXIT_INPUT = 3
EXIT_INFEASIBLE = 4
EXIT_NUMERICAL = 5


def fmt(x):
    """16 significant digits, the machine-output convention."""
    return None if x is None else float(f"{x:.16g}")


def human(x):
    """4 decimals, switching to scientific notation for small magnitudes."""
    return f"{x:.4f}" if x == 0 or abs(x) >= 1e-2 else f"{x:.4e}"


def _range(text):
    try:
        lo, hi = (float(t) for t in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected lo:hi, got {text!r}") from None
    if not 0 <= lo < hi:
        raise argparse.ArgumentTypeError("need 0 <= lo < hi")
    return lo, hi


def _emit(text, out):
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _load(path, weights=None):
    if path.startswith("fixture:"):
        problem = fixtures.by_name(path.split(":", 1)[1])
    else:
        problem = io.load(path)
    if weights == "unit":
        problem = dataclasses.replace(problem, weights=WeightSet.unit(problem.P.m), weights_spec="unit")
    elif weights == "norms":
        problem = dataclasses.replace(problem, weights=WeightSet.coefficient_norms(problem.P), weights_spec="norms")
    return problem


def _perturbation_summary(result, targets):
    return {
        "gamma": fmt(result.gamma),
        "bound": fmt(result.bound),
        "sigma_rho": fmt(result.sigma_rho),
        "degenerate_svd": result.degenerate_svd,
        "residuals": [fmt(r) for r in result.residuals],
        "targets": [io.complex_to_json(z) for z in targets.targets],
    }


def cmd_bounds(args):
    problem = _load(args.file, args.weights)
    gamma_range = args.range or problem.gamma_range or DEFAULT_RANGE
    strategy = args.strategy or problem.strategy or "min-upper"
    report = optimize_bounds(problem.P, problem.targets, problem.weights, gamma_range, strategy, args.grid)
    if args.human:
        lines = [
            f"strategy   {report.strategy}",
            f"beta_low   {human(report.beta_low_opt)}  at gamma = {human(report.gamma_low)}",
            (
                f"beta_up    {human(report.beta_up_opt)}  at gamma = {human(report.gamma_up)}"
                if report.beta_up_opt is not None
                else "beta_up    unavailable"
            ),
            f"gamma = 0  {human(report.q0.bound)}" if report.q0 is not None else "gamma = 0  unavailable",
        ]
        lines += [f"note: {n}" for n in report.notes]
        _emit("\n".join(lines) + "\n", None)
    else:
        doc = {
            "strategy": report.strategy,
            "gamma_range": [fmt(gamma_range[0]), fmt(gamma_range[1])],
            "beta_low_opt": fmt(report.beta_low_opt),
            "gamma_low": fmt(report.gamma_low),
            "beta_up_opt": fmt(report.beta_up_opt),
            "gamma_up": fmt(report.gamma_up),
            "q0_bound": fmt(report.q0.bound) if report.q0 is not None else None,
            "feasible_samples": sum(s.feasible for s in report.samples),
            "samples": len(report.samples),
            "notes": report.notes,
        }
        _emit(io.to_text(doc) + "\n", None)
    if report.beta_up_opt is None:
        print("no feasible gamma for the upper bound", file=sys.stderr)
        return EXIT_INFEASIBLE
    return EXIT_OK


def cmd_sweep(args):
    problem = _load(args.file, args.weights)
    lo, hi = args.range
    if args.spacing == "log":
        gammas = log_grid(lo, hi, args.points)
    else:
        gammas = np.linspace(hi, lo, args.points, endpoint=False)[::-1] if lo == 0 else np.linspace(lo, hi, args.points)
    rows = ["gamma,beta_low,beta_up,feasible"]
    for s in sweep(problem.P, problem.targets, problem.weights, gammas):
        up = "" if s.beta_up is None else f"{s.beta_up:.16g}"
        rows.append(f"{s.gamma:.16g},{s.beta_low:.16g},{up},{int(s.feasible)}")
    _emit("\n".join(rows) + "\n", args.out)
    return EXIT_OK


def cmd_perturb(args):
    problem = _load(args.file, args.weights)
    P, targets, weights = problem.P, problem.targets, problem.weights
    if args.gamma0 or (args.gamma is not None and args.gamma == 0):
        result = build_q0(P, targets, weights)
        branch = "gamma0"
    elif args.optimal:
        gamma_range = problem.gamma_range or DEFAULT_RANGE
        report = optimize_bounds(P, targets, weights, gamma_range, problem.strategy or "min-upper")
        if report.q_best is None:
            raise InfeasibleConstruction("no feasible gamma in range", "rank(V(gamma)) = k")
        result = report.q_best
        branch = "optimal"
    else:
        if args.gamma < 0:
            print("gamma must be nonnegative", file=sys.stderr)
            return EXIT_USAGE
        result = build_delta(P, targets, weights, args.gamma)
        branch = "gamma"
    summary = _perturbation_summary(result, targets)
    summary["branch"] = branch
    summary["delta_coefficients"] = [io.matrix_to_json(D) for D in result.delta_coeffs]
    out = io.Problem(
        P=result.Q,
        targets=targets,
        weights=weights,
        weights_spec=problem.weights_spec,
        gamma_range=problem.gamma_range,
        strategy=problem.strategy,
        extra={"perturbation": summary},
    )
    # weights are pinned explicitly: "norms" would otherwise be recomputed from Q
    _emit(io.dumps(out, explicit_weights=problem.weights_spec != "unit"), args.out)
    return EXIT_OK


def cmd_verify(args):
    problem = _load(args.qfile)
    targets = io.parse_targets(args.targets) if args.targets else problem.targets
    eig = spectrum(problem.P)
    checks = []
    for mu in targets.targets:
        gap = float(np.min(np.abs(eig - mu)))
        s_min = float(decompose(evaluate(problem.P, mu))[1][-1])
        checks.append(
            {
                "target": io.complex_to_json(mu),
                "spectrum_gap": fmt(gap),
                "smallest_singular_value": fmt(s_min),
                "pass": gap <= args.tol and s_min <= args.tol,
            }
        )
    ok = all(c["pass"] for c in checks)
    _emit(io.to_text({"tol": args.tol, "pass": ok, "targets": checks}) + "\n", None)
    if not ok:
        print("verification failed", file=sys.stderr)
    return EXIT_OK if ok else EXIT_VERIFY_FAILED


def cmd_fixture(args):
    _emit(io.dumps(fixtures.by_name(args.name)), args.out)
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(prog="polydist", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bounds", help="optimised lower/upper bounds")
    p.add_argument("file", help="problem file, or fixture:<name>")
    p.add_argument("--range", type=_range, help="gamma range lo:hi")
    p.add_argument("--strategy", choices=STRATEGIES)
    p.add_argument("--grid", type=int, default=DEFAULT_GRID, help="coarse grid size (default %(default)s)")
    p.add_argument("--human", action="store_true", help="4-decimal summary instead of JSON")
    p.add_argument("--weights", choices=("unit", "norms"), help="override the file's weights")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("sweep", help="tabulate both bounds over a gamma grid (CSV)")
    p.add_argument("file")
    p.add_argument("--range", type=_range, required=True)
    p.add_argument("--points", type=int, required=True)
    p.add_argument("--spacing", choices=("log", "linear"), default="log")
    p.add_argument("--out")
    p.add_argument("--weights", choices=("unit", "norms"), help="override the file's weights")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("perturb", help="write the perturbed polynomial Q_gamma")
    p.add_argument("file")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--gamma", type=float)
    g.add_argument("--optimal", action="store_true")
    g.add_argument("--gamma0", action="store_true")
    p.add_argument("--out")
    p.add_argument("--weights", choices=("unit", "norms"), help="override the file's weights")
    p.set_defaults(func=cmd_perturb)

    p = sub.add_parser("verify", help="check that targets lie in the spectrum of a polynomial")
    p.add_argument("qfile")
    p.add_argument("--targets", help="JSON list or file; defaults to the document's targets")
    p.add_argument("--tol", type=float, default=1e-5)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("fixture", help="print a built-in problem file")
    p.add_argument("name", help="example1, example2 or frank:<n>")
    p.add_argument("--out")
    p.set_defaults(func=cmd_fixture)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "points", 1) is not None and getattr(args, "points", 1) < 1:
        parser.error("--points must be >= 1")
    if getattr(args, "grid", 2) < 2:
        parser.error("--grid must be >= 2")
    try:
        return args.func(args)
    except InfeasibleConstruction as exc:
        print(f"infeasible: {exc} (hypothesis: {exc.hypothesis})", file=sys.stderr)
        return EXIT_INFEASIBLE
    except NumericalFailure as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (PolydistError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
