"""Random problem generators shared by the test modules."""
import numpy as np

from polydist import MatrixPolynomial, TargetSet, WeightSet, build_q0


def crandn(rng, *shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def random_poly(rng, n, m):
    return MatrixPolynomial(tuple(crandn(rng, n, n) for _ in range(m + 1)))


def random_targets(rng, k, radius=2.0, min_gap=0.4):
    while True:
        mu = radius * (rng.uniform(-1, 1, k) + 1j * rng.uniform(-1, 1, k))
        gaps = np.abs(mu[:, None] - mu[None, :]) + np.eye(k) * 1e9
        if gaps.min() >= min_gap:
            return TargetSet(mu)


def random_weights(rng, m):
    return WeightSet(rng.uniform(0.2, 2.0, m + 1))


def planted(rng, n, m, k):
    """A random polynomial whose spectrum contains k random targets (via the gamma = 0 construction)."""
    P = random_poly(rng, n, m)
    targets = random_targets(rng, k)
    weights = WeightSet.coefficient_norms(P)
    return build_q0(P, targets, weights).Q, targets


def horner_free_eval(P, lam):
    return sum(A * lam**j for j, A in enumerate(P.coeffs))
