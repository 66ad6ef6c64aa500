"""Construction of the perturbation Delta_gamma(lam) and the perturbed polynomial Q_gamma."""
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import InfeasibleConstruction, PreconditionError
from .fgamma import GammaAssembly, rho_triple
from .matpoly import MatrixPolynomial, TargetSet, WeightSet, evaluate, weight_poly
from .numkernel import EPS, as_matrix, decompose, pseudoinverse

# rank(V) = k requires s_k(V) > RANK_TOL * s_1(V); same test for the gamma = 0 vectors
RANK_TOL = 1e-10
# |beta_s| below this times max |beta| counts as zero
BETA_TOL = 1e-12
# ||Q(mu_i) x_i|| / scale above this marks the construction as numerically failed
RESIDUAL_TOL = 1e-7


@dataclass(frozen=True, eq=False)
class HatVectors:
    U_hat: np.ndarray
    V_hat: np.ndarray
    rank_V: int
    thetas: np.ndarray  # k x k, zero diagonal


@dataclass(frozen=True, eq=False)
class BetaScalars:
    alphas: np.ndarray
    betas: np.ndarray
    has_zero: bool


@dataclass(frozen=True, eq=False)
class PerturbationResult:
    """A perturbation ``Delta(lam) = sum_j delta_coeffs[j] lam**j`` and ``Q = P + Delta``.

    ``eigvecs`` holds unit vectors x_i with Q(mu_i) x_i ~ 0 and ``residuals``
    the norms ||Q(mu_i) x_i||_2. ``bound`` is the weighted distance the
    perturbation certifies.
    """

    gamma: float
    delta_gamma: np.ndarray
    delta_coeffs: tuple
    Q: MatrixPolynomial
    eigvecs: np.ndarray
    residuals: np.ndarray
    bound: float
    sigma_rho: float
    degenerate_svd: bool = False
    hat: HatVectors = None
    betas: BetaScalars = None
    notes: list = field(default_factory=list)


def phase_powers(mu, m):
    """``(conj(mu)/|mu|)**j`` for j = 0..m; for mu = 0 this is 1 at j = 0 and 0 after."""
    mu = complex(mu)
    out = np.zeros(m + 1, dtype=np.complex128)
    out[0] = 1.0
    if mu != 0:
        out[1:] = (mu.conjugate() / abs(mu)) ** np.arange(1, m + 1)
    return out


def hat_transform(triple, targets, gamma):
    """Hat vectors decoupling the block equations into ``s_rho * u_hat_i = P(mu_i) v_hat_i``."""
    gamma = float(gamma)
    if not gamma > 0:
        raise PreconditionError("hat_transform needs gamma > 0")
    nodes = np.ascontiguousarray(targets.targets)
    U = np.ascontiguousarray(triple.U)
    V = np.ascontiguousarray(triple.V)
    s = decompose(V)[1]
    rank_V = int(np.sum(s > RANK_TOL * s[0])) if s[0] > 0 else 0
    return HatVectors(
        U_hat=kernels.hat_combine(U, nodes, gamma),
        V_hat=kernels.hat_combine(V, nodes, gamma),
        rank_V=rank_V,
        thetas=kernels.theta_matrix(nodes, gamma),
    )


def beta_scalars(weights, targets):
    w = weights.weights
    m = w.size - 1
    mu = targets.targets
    powers = mu[None, :] ** np.arange(m + 1)[:, None]  # powers[j, s] = mu_s**j
    rows = []
    for mu_i in mu:
        rows.append((phase_powers(mu_i, m) * w) @ powers / weight_poly(weights, abs(mu_i)))
    alphas = np.array(rows)
    betas = alphas.mean(axis=0)
    scale = np.max(np.abs(betas))
    has_zero = bool(scale == 0 or np.any(np.abs(betas) < BETA_TOL * scale))
    return BetaScalars(alphas, betas, has_zero)


def coefficient_factors(weights, targets):
    """``c_j`` with ``Delta_{gamma,j} = c_j * Delta_gamma``."""
    w = weights.weights
    m = w.size - 1
    acc = np.zeros(m + 1, dtype=np.complex128)
    for mu_i in targets.targets:
        acc += phase_powers(mu_i, m) / weight_poly(weights, abs(mu_i))
    return acc / targets.k * w


def upper_scale(weights, targets):
    """``(1/k) sum_i 1 / w(|mu_i|)``, the factor turning ||Delta_gamma|| into beta_up."""
    return sum(1.0 / weight_poly(weights, abs(mu)) for mu in targets.targets) / targets.k


def residual_scale(P, mu):
    return max(float(decompose(A)[1][0]) for A in P.coeffs) * max(1.0, abs(mu)) ** P.m


def _unit_columns(X):
    norms = np.linalg.norm(X, axis=0)
    norms[norms == 0] = 1.0
    return X / norms


def _residuals(Q, targets, X):
    return np.array([np.linalg.norm(evaluate(Q, mu) @ X[:, i]) for i, mu in enumerate(targets.targets)])


def _smallest_right_vectors(P, targets):
    cols, sigmas, lefts = [], [], []
    for mu in targets.targets:
        U, s, Vh = decompose(evaluate(P, mu))
        cols.append(Vh[-1].conj())
        lefts.append(U[:, -1])
        sigmas.append(s[-1])
    return np.array(lefts).T, np.array(sigmas), np.array(cols).T


def _check_residuals(P, targets, result):
    worst = max(
        r / residual_scale(P, mu) for r, mu in zip(result.residuals, targets.targets)
    )
    if worst > RESIDUAL_TOL:
        raise InfeasibleConstruction(
            f"perturbed polynomial misses a target (relative residual {worst:.3e})",
            "Q(mu_i) v_hat_i = 0",
        )


def _with_coefficients(P, weights, targets, gamma, delta, factors=None):
    if factors is None:
        factors = coefficient_factors(weights, targets)
    coeffs = tuple(c * delta for c in factors)
    Q = MatrixPolynomial(tuple(A + D for A, D in zip(P.coeffs, coeffs)))
    return coeffs, Q


def build_delta(P, targets, weights, gamma, hat=None, betas=None, triple=None, check=True):
    """Perturbation at ``gamma > 0`` placing every target in the spectrum of Q_gamma.

    Missing ingredients (``triple``, ``hat``, ``betas``) are computed. Raises
    ``InfeasibleConstruction`` when rank(V(gamma)) < k, some beta_s vanishes,
    or (with ``check``) the resulting residuals are not small.
    """
    gamma = float(gamma)
    if not gamma > 0:
        raise PreconditionError("build_delta needs gamma > 0; use build_q0 for gamma = 0")
    targets.check_fits(P)
    if len(weights) != P.m + 1:
        raise PreconditionError(f"expected {P.m + 1} weights, got {len(weights)}")
    if triple is None:
        triple = rho_triple(GammaAssembly(P, targets).at(gamma))
    n = P.n

    if triple.is_zero():
        _, _, X = _smallest_right_vectors(P, targets)
        zero = np.zeros((n, n), dtype=np.complex128)
        return PerturbationResult(
            gamma=gamma,
            delta_gamma=zero,
            delta_coeffs=tuple(zero.copy() for _ in P.coeffs),
            Q=P,
            eigvecs=X,
            residuals=_residuals(P, targets, X),
            bound=0.0,
            sigma_rho=triple.sigma,
            degenerate_svd=triple.degenerate,
            notes=["targets already in the spectrum"],
        )

    if hat is None:
        hat = hat_transform(triple, targets, gamma)
    if betas is None:
        betas = beta_scalars(weights, targets)
    if hat.rank_V < targets.k:
        raise InfeasibleConstruction(
            f"rank(V(gamma)) = {hat.rank_V} < k = {targets.k} at gamma = {gamma:g}",
            "rank(V(gamma)) = k",
        )
    if betas.has_zero:
        raise InfeasibleConstruction("some beta_s vanishes", "beta_s nonzero")

    shape = (hat.U_hat / betas.betas) @ pseudoinverse(hat.V_hat)
    delta = -triple.sigma * shape
    coeffs, Q = _with_coefficients(P, weights, targets, gamma, delta)
    X = _unit_columns(hat.V_hat)
    result = PerturbationResult(
        gamma=gamma,
        delta_gamma=delta,
        delta_coeffs=coeffs,
        Q=Q,
        eigvecs=X,
        residuals=_residuals(Q, targets, X),
        # ordered so that w = {1, 0} reduces to exactly s_rho * ||U_hat V_hat^+||
        bound=upper_scale(weights, targets) * triple.sigma * float(decompose(shape)[1][0]),
        sigma_rho=triple.sigma,
        degenerate_svd=triple.degenerate,
        hat=hat,
        betas=betas,
        notes=["rho-th singular value is repeated"] if triple.degenerate else [],
    )
    if check:
        _check_residuals(P, targets, result)
    return result


def build_q0(P, targets, weights, check=True):
    """Constant perturbation Delta_0 (added to A_0) from the smallest singular triples of each P(mu_i)."""
    targets.check_fits(P)
    if len(weights) != P.m + 1:
        raise PreconditionError(f"expected {P.m + 1} weights, got {len(weights)}")
    n = P.n
    Ut, sigmas, Vt = _smallest_right_vectors(P, targets)
    norms = [float(decompose(evaluate(P, mu))[1][0]) for mu in targets.targets]
    sigmas = np.where(sigmas <= n * EPS * np.array(norms), 0.0, sigmas)
    zero = np.zeros((n, n), dtype=np.complex128)
    factors = np.zeros(P.m + 1)
    factors[0] = 1.0

    if not np.any(sigmas):
        return PerturbationResult(
            gamma=0.0,
            delta_gamma=zero,
            delta_coeffs=tuple(zero.copy() for _ in P.coeffs),
            Q=P,
            eigvecs=Vt,
            residuals=_residuals(P, targets, Vt),
            bound=0.0,
            sigma_rho=0.0,
            notes=["targets already in the spectrum"],
        )

    s = decompose(Vt)[1]
    if s[-1] <= RANK_TOL * s[0]:
        raise InfeasibleConstruction(
            "smallest right singular vectors of P(mu_i) are linearly dependent",
            "v_tilde_1..v_tilde_k linearly independent",
        )
    delta = -((Ut * sigmas) @ pseudoinverse(Vt))
    coeffs, Q = _with_coefficients(P, weights, targets, 0.0, delta, factors)
    result = PerturbationResult(
        gamma=0.0,
        delta_gamma=delta,
        delta_coeffs=coeffs,
        Q=Q,
        eigvecs=Vt,
        residuals=_residuals(Q, targets, Vt),
        bound=float(decompose(delta)[1][0]) / weights.weights[0],
        sigma_rho=float(np.max(sigmas)),
    )
    if check:
        _check_residuals(P, targets, result)
    return result


def standard_problem(A):
    """``(P, w)`` for the matrix eigenproblem: ``P(lam) = I lam - A`` and ``w = {1, 0}``."""
    A = as_matrix(A)
    if A.shape[0] != A.shape[1]:
        raise PreconditionError("the standard eigenproblem needs a square matrix")
    P = MatrixPolynomial((-A, np.eye(A.shape[0], dtype=np.complex128)))
    return P, WeightSet.unit(1)


def build_delta_standard(A, targets, gamma, check=True):
    """Perturbation of a single matrix A whose perturbed eigenvalues include the targets.

    Only the constant coefficient moves; the perturbed matrix is
    ``A - result.delta_gamma``, i.e. ``A + s_rho * U_hat @ pinv(V_hat)``.
    """
    if not isinstance(targets, TargetSet):
        targets = TargetSet(targets)
    P, w = standard_problem(A)
    return build_delta(P, targets, w, gamma, check=check)
