"""Lower and upper bounds on the weighted distance, and their optimisation over gamma."""
import math
from dataclasses import dataclass, field
from typing import NamedTuple, Optional

import numpy as np

from .errors import InfeasibleConstruction, PreconditionError
from .fgamma import GammaAssembly, rho_triple
from .numkernel import decompose
from .perturb import PerturbationResult, build_delta, build_q0

STRATEGIES = ("min-upper", "max-lower", "min-gap")
GAMMA_FLOOR = 1e-8
DEFAULT_RANGE = (GAMMA_FLOOR, 10.0)
DEFAULT_GRID = 200
GAMMA_RTOL = 1e-6


class Sample(NamedTuple):
    gamma: float
    beta_low: float
    beta_up: Optional[float]
    feasible: bool


class MinimizeResult(NamedTuple):
    x: float
    fun: float
    converged: bool
    nfev: int


@dataclass
class BoundsReport:
    """Optimised bounds ``beta_low_opt <= D_w(P, Sigma) <= beta_up_opt``.

    ``beta_up_opt`` and ``gamma_up`` are ``None`` when no sampled gamma admits
    the construction.
    """

    strategy: str
    beta_low_opt: float
    gamma_low: float
    beta_up_opt: Optional[float]
    gamma_up: Optional[float]
    samples: list
    q_best: Optional[PerturbationResult] = None
    q0: Optional[PerturbationResult] = None
    notes: list = field(default_factory=list)


class _Evaluator:
    """Caches the gamma-independent data of one problem."""

    def __init__(self, P, targets, weights):
        if len(weights) != P.m + 1:
            raise PreconditionError(f"expected {P.m + 1} weights, got {len(weights)}")
        self.P, self.targets, self.weights = P, targets, weights
        self.assembly = GammaAssembly(P, targets, weights)

    def triple(self, gamma):
        return rho_triple(self.assembly.at(gamma))

    def low(self, gamma, triple=None):
        if triple is None:
            triple = self.triple(gamma)
        if triple.is_zero():
            return 0.0
        return triple.sigma / float(decompose(self.assembly.varpi_at(gamma))[1][0])

    def up(self, gamma, triple=None):
        if triple is None:
            triple = self.triple(gamma)
        result = build_delta(self.P, self.targets, self.weights, gamma, triple=triple)
        return result.bound, result

    def sample(self, gamma):
        triple = self.triple(gamma)
        low = self.low(gamma, triple)
        try:
            up, _ = self.up(gamma, triple)
        except InfeasibleConstruction:
            return Sample(gamma, low, None, False)
        return Sample(gamma, low, up, True)


def _positive(gamma):
    gamma = float(gamma)
    if not gamma > 0:
        raise PreconditionError(f"gamma must be positive, got {gamma}")
    return gamma


def beta_low(P, targets, weights, gamma):
    """``s_rho(F_gamma[P, Sigma]) / ||F_gamma[varpi, Sigma]||_2``; exactly 0 when s_rho vanishes."""
    return _Evaluator(P, targets, weights).low(_positive(gamma))


def beta_up(P, targets, weights, gamma):
    """Upper bound at ``gamma`` and the perturbation that attains it.

    Raises ``InfeasibleConstruction`` when the construction does not apply.
    """
    return _Evaluator(P, targets, weights).up(_positive(gamma))


def sweep(P, targets, weights, gammas):
    ev = _Evaluator(P, targets, weights)
    return [ev.sample(_positive(g)) for g in gammas]


def minimize_scalar(f, lo, hi, tol=1e-8, max_iter=500):
    """Bounded scalar minimisation: golden section with parabolic steps (Brent).

    Non-finite values of ``f`` are treated as +inf and force golden steps.
    Returns the best point seen; ``converged`` is False when ``max_iter``
    runs out first.
    """
    if not lo < hi:
        raise PreconditionError("minimize_scalar needs lo < hi")
    golden = 0.5 * (3.0 - math.sqrt(5.0))
    sqrt_eps = math.sqrt(np.finfo(float).eps)
    nfev = 0

    def call(x):
        nonlocal nfev
        nfev += 1
        y = f(x)
        return y if y is not None and math.isfinite(y) else math.inf

    a, b = lo, hi
    x = w = v = a + golden * (b - a)
    fx = fw = fv = call(x)
    d = e = 0.0
    best_x, best_f = x, fx
    for _ in range(max_iter):
        mid = 0.5 * (a + b)
        tol1 = sqrt_eps * abs(x) + tol / 3.0
        tol2 = 2.0 * tol1
        if abs(x - mid) <= tol2 - 0.5 * (b - a):
            return MinimizeResult(best_x, best_f, True, nfev)
        use_golden = True
        if abs(e) > tol1 and math.isfinite(fx) and math.isfinite(fw) and math.isfinite(fv):
            r = (x - w) * (fx - fv)
            q = (x - v) * (fx - fw)
            p = (x - v) * q - (x - w) * r
            q = 2.0 * (q - r)
            if q > 0:
                p = -p
            q = abs(q)
            if abs(p) < abs(0.5 * q * e) and q * (a - x) < p < q * (b - x):
                e, d = d, p / q
                u = x + d
                if u - a < tol2 or b - u < tol2:
                    d = tol1 if x < mid else -tol1
                use_golden = False
        if use_golden:
            e = (b - x) if x < mid else (a - x)
            d = golden * e
        u = x + (d if abs(d) >= tol1 else math.copysign(tol1, d))
        fu = call(u)
        if fu < best_f:
            best_x, best_f = u, fu
        if fu <= fx:
            if u < x:
                b = x
            else:
                a = x
            v, fv, w, fw, x, fx = w, fw, x, fx, u, fu
        else:
            if u < x:
                a = u
            else:
                b = u
            if fu <= fw or w == x:
                v, fv, w, fw = w, fw, u, fu
            elif fu <= fv or v == x or v == w:
                v, fv = u, fu
    return MinimizeResult(best_x, best_f, False, nfev)


def log_grid(lo, hi, points):
    lo = max(float(lo), GAMMA_FLOOR)
    hi = float(hi)
    if not lo < hi:
        raise PreconditionError(f"empty gamma range ({lo}, {hi}]")
    if points == 1:
        return np.array([hi])
    return np.geomspace(lo, hi, points)


def _refine(objective, grid, values):
    """Grid argmin, then a bounded search on the neighbouring cells. Returns (gamma, value)."""
    i = int(np.argmin(values))
    best = (grid[i], values[i])
    if not math.isfinite(values[i]):
        return best
    a = grid[max(i - 1, 0)]
    b = grid[min(i + 1, len(grid) - 1)]
    if a < b:
        res = minimize_scalar(objective, a, b, tol=GAMMA_RTOL * grid[i])
        if res.fun < best[1]:
            best = (res.x, res.fun)
    return best


def optimize_bounds(P, targets, weights, gamma_range=DEFAULT_RANGE, strategy="min-upper", grid=DEFAULT_GRID):
    """Coarse log-spaced scan of gamma followed by local refinement.

    ``min-upper`` and ``max-lower`` optimise each bound at its own gamma;
    ``min-gap`` minimises ``beta_up - beta_low`` and reports both at one gamma.
    The gamma = 0 construction is attached when it applies.
    """
    if strategy not in STRATEGIES:
        raise PreconditionError(f"unknown strategy {strategy!r}; choose from {STRATEGIES}")
    lo, hi = gamma_range
    if not (lo >= 0 and lo < hi):
        raise PreconditionError(f"bad gamma range ({lo}, {hi}]")
    ev = _Evaluator(P, targets, weights)
    gammas = log_grid(lo, hi, grid)
    samples = [ev.sample(g) for g in gammas]
    notes = []

    lows = np.array([s.beta_low for s in samples])
    ups = np.array([s.beta_up if s.feasible else math.inf for s in samples])

    def up_or_inf(g):
        try:
            return ev.up(g)[0]
        except InfeasibleConstruction:
            return math.inf

    if strategy == "min-gap":
        def gap(g):
            return up_or_inf(g) - ev.low(g)

        g_star, _ = _refine(gap, gammas, ups - lows)
        gamma_low = gamma_up = g_star
        low_opt = ev.low(g_star)
    else:
        gamma_low, neg = _refine(lambda g: -ev.low(g), gammas, -lows)
        low_opt = -neg
        gamma_up, _ = _refine(up_or_inf, gammas, ups)

    q_best = None
    up_opt = None
    if np.any(np.isfinite(ups)):
        try:
            up_opt, q_best = ev.up(gamma_up)
        except InfeasibleConstruction:
            gamma_up = None
    else:
        gamma_up = None
    if gamma_up is None:
        notes.append("no sampled gamma satisfies the hypotheses of the upper-bound construction")
    elif q_best.degenerate_svd:
        notes.append("rho-th singular value is repeated at gamma_up; beta_up may depend on the chosen pair")

    try:
        q0 = build_q0(P, targets, weights)
    except InfeasibleConstruction as exc:
        q0 = None
        notes.append(f"gamma = 0 branch unavailable: {exc}")

    return BoundsReport(
        strategy=strategy,
        beta_low_opt=float(low_opt),
        gamma_low=float(gamma_low),
        beta_up_opt=None if up_opt is None else float(up_opt),
        gamma_up=None if gamma_up is None else float(gamma_up),
        samples=samples,
        q_best=q_best,
        q0=q0,
        notes=notes,
    )
