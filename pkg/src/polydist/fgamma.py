"""Block matrices F_gamma[P, Sigma] and F_gamma[varpi, Sigma], and their rho-th singular triple."""
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import kernels
from .errors import PreconditionError
from .matpoly import divided_difference_table, evaluate
from .numkernel import EPS, decompose

# s_rho counts as repeated when its gap to a neighbour is below this times s_1
DEGENERACY_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class GammaMatrix:
    """The nk x nk block lower-triangular matrix F_gamma[P, Sigma]."""

    gamma: float
    k: int
    n: int
    matrix: np.ndarray

    @property
    def rho(self):
        """1-based index ``nk - k + 1``: the k-th smallest singular value."""
        return self.n * self.k - self.k + 1

    def block(self, i, j):
        n = self.n
        return self.matrix[i * n : (i + 1) * n, j * n : (j + 1) * n]

    @cached_property
    def norm(self):
        return float(decompose(self.matrix)[1][0])


@dataclass(frozen=True, eq=False)
class RhoTriple:
    """The rho-th singular value of F_gamma with its singular vector pair.

    ``u`` and ``v`` have length nk; ``U`` and ``V`` are their n x k partitions.
    """

    sigma: float
    u: np.ndarray
    v: np.ndarray
    n: int
    k: int
    norm: float
    degenerate: bool = False

    @property
    def U(self):
        return self.u.reshape(self.k, self.n).T

    @property
    def V(self):
        return self.v.reshape(self.k, self.n).T

    def is_zero(self):
        """True when sigma is indistinguishable from zero at working precision."""
        return self.sigma <= self.n * self.k * EPS * self.norm


class GammaAssembly:
    """Divided-difference data for one (P, Sigma), reused for every gamma.

    gamma only enters F_gamma through scalar powers, so the table and the
    varpi recursion are computed once.
    """

    def __init__(self, P, targets, weights=None):
        targets.check_fits(P)
        self.P = P
        self.targets = targets
        self.weights = weights
        self.nodes = np.ascontiguousarray(targets.targets)
        self.table = divided_difference_table(P, self.nodes)
        self.varpi = None if weights is None else kernels.varpi_table(
            np.ascontiguousarray(weights.weights), self.nodes
        )

    @property
    def n(self):
        return self.P.n

    @property
    def k(self):
        return self.targets.k

    def at(self, gamma):
        gamma = _check_gamma(gamma)
        return GammaMatrix(gamma, self.k, self.n, kernels.assemble_blocks(self.table, gamma))

    def varpi_at(self, gamma):
        if self.varpi is None:
            raise PreconditionError("no weights attached to this assembly")
        return kernels.assemble_lower(self.varpi, _check_gamma(gamma))


def _check_gamma(gamma):
    gamma = float(gamma)
    if not np.isfinite(gamma) or gamma < 0:
        raise PreconditionError(f"gamma must be real and nonnegative, got {gamma}")
    return gamma


def assemble_F(P, targets, gamma):
    return GammaAssembly(P, targets).at(gamma)


def assemble_F_varpi(weights, targets, gamma):
    """k x k lower-triangular matrix with entries ``gamma**(i-j) * varpi[mu_j..mu_i]``."""
    nodes = np.ascontiguousarray(targets.targets)
    table = kernels.varpi_table(np.ascontiguousarray(weights.weights), nodes)
    return kernels.assemble_lower(table, _check_gamma(gamma))


def rho_triple(F):
    U, s, Vh = decompose(F.matrix)
    r = F.rho - 1
    tol = DEGENERACY_TOL * s[0]
    degenerate = (r > 0 and s[r - 1] - s[r] < tol) or (r + 1 < s.size and s[r] - s[r + 1] < tol)
    return RhoTriple(
        sigma=float(s[r]),
        u=U[:, r],
        v=Vh[r].conj(),
        n=F.n,
        k=F.k,
        norm=float(s[0]),
        degenerate=bool(degenerate),
    )


def null_family(P, targets, gamma, tol=1e-8):
    """k vectors spanning part of the null space of F_gamma[P, Sigma] when Sigma is in sigma(P).

    Column i is zero above block i, holds an eigenvector nu_i of P(mu_i) in
    block i and ``prod_{j=i+1}^{q} theta[i, j] * nu_i`` in block q > i.
    Returns an (nk, k) array.
    """
    gamma = _check_gamma(gamma)
    if gamma == 0:
        raise PreconditionError("null_family needs gamma > 0")
    targets.check_fits(P)
    n, k = P.n, targets.k
    nodes = np.ascontiguousarray(targets.targets)
    theta = kernels.theta_matrix(nodes, gamma)
    X = np.zeros((n * k, k), dtype=np.complex128)
    for i, mu in enumerate(nodes):
        _, s, Vh = decompose(evaluate(P, mu))
        if s[-1] > tol * max(s[0], 1.0):
            raise PreconditionError(f"target {mu} is not an eigenvalue of P (s_n = {s[-1]:.3e})")
        nu = Vh[-1].conj()
        scale = 1.0 + 0.0j
        X[i * n : (i + 1) * n, i] = nu
        for q in range(i + 1, k):
            scale *= theta[i, q]
            X[q * n : (q + 1) * n, i] = scale * nu
    return X
