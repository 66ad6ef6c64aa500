"""Matrix polynomials, weights, target sets and the scalar varpi quantities."""
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import PreconditionError
from .numkernel import as_matrix, decompose, eigenvalues

# min |mu_i - mu_j| must exceed this times max(1 + |mu_i|)
SEPARATION_TOL = 1e-8
# A_m counts as singular when s_min(A_m) <= this times ||A_m||_2
SINGULAR_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class MatrixPolynomial:
    """``P(lam) = sum_j coeffs[j] * lam**j`` with square, nonsingular leading coefficient."""

    coeffs: tuple

    def __post_init__(self):
        coeffs = tuple(as_matrix(A) for A in self.coeffs)
        if not coeffs:
            raise PreconditionError("a matrix polynomial needs at least one coefficient")
        n = coeffs[0].shape[0]
        for j, A in enumerate(coeffs):
            if A.shape != (n, n):
                raise PreconditionError(f"coefficient {j} has shape {A.shape}, expected ({n}, {n})")
        s = decompose(coeffs[-1])[1]
        if s[-1] <= SINGULAR_TOL * s[0]:
            raise PreconditionError("leading coefficient is numerically singular")
        object.__setattr__(self, "coeffs", coeffs)

    @property
    def n(self):
        return self.coeffs[0].shape[0]

    @property
    def m(self):
        return len(self.coeffs) - 1

    def __call__(self, lam):
        return evaluate(self, lam)

    def stacked(self):
        return np.stack(self.coeffs)

    def coefficient_norms(self):
        return np.array([decompose(A)[1][0] for A in self.coeffs])


@dataclass(frozen=True, eq=False)
class WeightSet:
    """Nonnegative weights ``w_0..w_m`` with ``w_0 > 0``."""

    weights: np.ndarray

    def __post_init__(self):
        w = np.array(self.weights, dtype=float).ravel()
        if w.size == 0 or not np.all(np.isfinite(w)):
            raise PreconditionError("weights must be a nonempty list of finite numbers")
        if np.any(w < 0):
            raise PreconditionError("weights must be nonnegative")
        if w[0] <= 0:
            raise PreconditionError("w_0 must be positive")
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)

    @classmethod
    def unit(cls, m):
        """``{1, 0, ..., 0}``: only the constant coefficient may move."""
        w = np.zeros(m + 1)
        w[0] = 1.0
        return cls(w)

    @classmethod
    def coefficient_norms(cls, P):
        return cls(P.coefficient_norms())

    def __len__(self):
        return self.weights.size

    def __call__(self, r):
        return weight_poly(self, r)


@dataclass(frozen=True, eq=False)
class TargetSet:
    """Ordered, pairwise distinct complex targets ``mu_1..mu_k``.

    The order matters: it fixes the block layout of F_gamma and therefore the
    bound values.
    """

    targets: np.ndarray

    def __post_init__(self):
        mu = np.array(self.targets, dtype=np.complex128).ravel()
        if mu.size == 0:
            raise PreconditionError("at least one target is required")
        if not np.all(np.isfinite(mu)):
            raise PreconditionError("targets must be finite")
        check_distinct(mu)
        mu.setflags(write=False)
        object.__setattr__(self, "targets", mu)

    @property
    def k(self):
        return self.targets.size

    def __len__(self):
        return self.targets.size

    def __iter__(self):
        return iter(self.targets)

    def check_fits(self, P):
        if self.k > P.n:
            raise PreconditionError(f"k = {self.k} targets exceed the dimension n = {P.n}")


def check_distinct(nodes):
    nodes = np.asarray(nodes, dtype=np.complex128)
    if nodes.size < 2:
        return
    gaps = np.abs(nodes[:, None] - nodes[None, :])
    np.fill_diagonal(gaps, np.inf)
    if gaps.min() < SEPARATION_TOL * np.max(1 + np.abs(nodes)):
        raise PreconditionError(f"targets are not distinct (min separation {gaps.min():.3e})")


def evaluate(P, lam):
    """Horner evaluation of ``P`` at a complex scalar."""
    lam = complex(lam)
    out = P.coeffs[-1].copy()
    for A in P.coeffs[-2::-1]:
        out = out * lam + A
    return out


def weight_poly(w, r):
    """``w(r) = sum_j w_j r**j`` for ``r >= 0``."""
    if r < 0:
        raise PreconditionError("weight polynomial is only evaluated at r >= 0")
    acc = 0.0
    for wj in w.weights[::-1]:
        acc = acc * r + wj
    return float(acc)


def divided_difference_table(P, nodes):
    """Upper-triangular table ``T[j, i] = P[nodes[j], ..., nodes[i]]`` (shape k, k, n, n)."""
    nodes = np.asarray(nodes, dtype=np.complex128)
    values = np.stack([evaluate(P, mu) for mu in nodes])
    return kernels.divided_difference_table(values, nodes)


def divided_difference(P, nodes):
    """Matrix-valued Newton divided difference ``P[nodes[0], ..., nodes[-1]]``."""
    nodes = np.asarray(nodes, dtype=np.complex128).ravel()
    if nodes.size == 0:
        raise PreconditionError("at least one node is required")
    check_distinct(nodes)
    return divided_difference_table(P, nodes)[0, -1]


def companion(P):
    """Monic block companion matrix (mn x mn) of ``P``."""
    n, m = P.n, P.m
    if m == 0:
        raise PreconditionError("a degree-0 polynomial has no finite eigenvalues")
    scaled = np.linalg.solve(P.coeffs[-1], np.hstack(P.coeffs[:-1]))
    C = np.zeros((m * n, m * n), dtype=np.complex128)
    C[: (m - 1) * n, n:] = np.eye((m - 1) * n)
    C[(m - 1) * n :, :] = -scaled
    return C


def spectrum(P):
    """All ``m * n`` eigenvalues of ``P`` via the companion linearization."""
    return eigenvalues(companion(P))


def varpi_single(w, mu):
    return weight_poly(w, abs(complex(mu)))


def varpi_pair(w, mu_a, mu_b):
    """``sum_j w_j |mu_a**j - mu_b**j| / |mu_a - mu_b|``."""
    mu_a, mu_b = complex(mu_a), complex(mu_b)
    if mu_a == mu_b:
        raise PreconditionError("varpi_pair needs distinct nodes")
    total = sum(wj * abs(mu_a**j - mu_b**j) for j, wj in enumerate(w.weights))
    return float(total / abs(mu_a - mu_b))


def varpi_recursive(w, nodes):
    """varpi over three or more nodes.

    The recursion adds the two shorter values (no cancellation) and divides
    by the modulus of the end-node gap.
    """
    nodes = np.asarray(nodes, dtype=np.complex128).ravel()
    if nodes.size < 3:
        raise PreconditionError("varpi_recursive needs at least three nodes")
    check_distinct(nodes)
    return float(kernels.varpi_table(w.weights, nodes)[0, -1])


def varpi(w, nodes):
    """Dispatch on the node count."""
    nodes = np.asarray(nodes, dtype=np.complex128).ravel()
    if nodes.size == 1:
        return varpi_single(w, nodes[0])
    if nodes.size == 2:
        return varpi_pair(w, nodes[0], nodes[1])
    return varpi_recursive(w, nodes)
