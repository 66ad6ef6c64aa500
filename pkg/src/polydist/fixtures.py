"""Built-in problems: the two worked examples and Frank matrices."""
import numpy as np

from .errors import PreconditionError
from .problemfile import Problem
from .matpoly import MatrixPolynomial, TargetSet, WeightSet

EXAMPLE1_COEFFS = (
    [[-5, 0, 5], [-2, -2, 10], [1, 9, 2]],
    [[9, -3, 3], [-5, 8, 10], [4, -3, 0]],
    [[7, 9, -2], [0, -2, 0], [6, -3, -1]],
)
EXAMPLE1_TARGETS = (1 + 1j, -2, 3)

# -0.1 first: the bound values depend on the target order, and this order
# reproduces the published 6.4007e-4 / 8.6167e-4 at gamma = 2.5730
FRANK_TARGETS = (-0.1, 0.1, 0.1j, -0.1j)


def frank_matrix(order):
    """Upper Hessenberg Frank matrix: ``F[i, j] = order + 1 - max(i, j)`` (1-based) for i <= j + 1."""
    if order < 1:
        raise PreconditionError("Frank matrix order must be >= 1")
    i, j = np.indices((order, order)) + 1
    F = (order + 1 - np.maximum(i, j)).astype(float)
    F[i > j + 1] = 0.0
    return F


def example1():
    P = MatrixPolynomial(tuple(np.array(A, dtype=complex) for A in EXAMPLE1_COEFFS))
    return Problem(
        P=P,
        targets=TargetSet(EXAMPLE1_TARGETS),
        weights=WeightSet.coefficient_norms(P),
        weights_spec=None,
        gamma_range=(0.0, 10.0),
        strategy="min-upper",
    )


def frank_problem(order, targets=FRANK_TARGETS, gamma_range=(0.0, 5.0)):
    F = frank_matrix(order)
    P = MatrixPolynomial((-F.astype(complex), np.eye(order, dtype=complex)))
    return Problem(
        P=P,
        targets=TargetSet(targets[: min(len(targets), order)]),
        weights=WeightSet.unit(1),
        weights_spec="unit",
        gamma_range=gamma_range,
        strategy="min-gap",
    )


def example2():
    return frank_problem(12)


def by_name(name):
    if name == "example1":
        return example1()
    if name == "example2":
        return example2()
    if name.startswith("frank:"):
        try:
            order = int(name.split(":", 1)[1])
        except ValueError:
            raise PreconditionError(f"bad Frank order in {name!r}") from None
        return frank_problem(order)
    raise PreconditionError(f"unknown fixture {name!r}; expected example1, example2 or frank:<n>")
