"""Loop kernels compiled with numba; same contracts as ``_kernels_numpy``."""
import numpy as np
from numba import njit


@njit(cache=True)
def divided_difference_table(values, nodes):
    k, n, _ = values.shape
    table = np.zeros((k, k, n, n), dtype=np.complex128)
    for i in range(k):
        table[i, i] = values[i]
    for t in range(1, k):
        for j in range(k - t):
            inv = 1.0 / (nodes[j] - nodes[j + t])
            for r in range(n):
                for c in range(n):
                    table[j, j + t, r, c] = (table[j, j + t - 1, r, c] - table[j + 1, j + t, r, c]) * inv
    return table


@njit(cache=True)
def assemble_blocks(table, gamma):
    k, _, n, _ = table.shape
    out = np.zeros((k * n, k * n), dtype=np.complex128)
    for i in range(k):
        for j in range(i + 1):
            scale = gamma ** (i - j)
            for r in range(n):
                for c in range(n):
                    out[i * n + r, j * n + c] = scale * table[j, i, r, c]
    return out


@njit(cache=True)
def varpi_table(weights, nodes):
    k = nodes.shape[0]
    m1 = weights.shape[0]
    table = np.zeros((k, k))
    for i in range(k):
        r = abs(nodes[i])
        acc = 0.0
        for p in range(m1 - 1, -1, -1):
            acc = acc * r + weights[p]
        table[i, i] = acc
    for i in range(k - 1):
        a = nodes[i]
        b = nodes[i + 1]
        acc = 0.0
        for p in range(m1):
            acc += weights[p] * abs(a**p - b**p)
        table[i, i + 1] = acc / abs(a - b)
    for t in range(2, k):
        for j in range(k - t):
            table[j, j + t] = (table[j, j + t - 1] + table[j + 1, j + t]) / abs(nodes[j] - nodes[j + t])
    return table


@njit(cache=True)
def assemble_lower(table, gamma):
    k = table.shape[0]
    out = np.zeros((k, k))
    for i in range(k):
        for j in range(i + 1):
            out[i, j] = gamma ** (i - j) * table[j, i]
    return out


@njit(cache=True)
def theta_matrix(nodes, gamma):
    k = nodes.shape[0]
    theta = np.zeros((k, k), dtype=np.complex128)
    for i in range(k):
        for j in range(k):
            if i != j:
                theta[i, j] = gamma / (nodes[i] - nodes[j])
    return theta


@njit(cache=True)
def hat_coefficients(nodes, gamma):
    k = nodes.shape[0]
    theta = theta_matrix(nodes, gamma)
    coef = np.eye(k, dtype=np.complex128)
    for p in range(1, k):
        prod = 1.0 + 0.0j
        sign = 1.0
        for i in range(1, p + 1):
            prod *= theta[p - i, p]
            sign = -sign
            coef[p - i, p] = sign * prod
    return coef


@njit(cache=True)
def hat_combine(parts, nodes, gamma):
    n, k = parts.shape
    coef = hat_coefficients(nodes, gamma)
    out = np.zeros((n, k), dtype=np.complex128)
    for p in range(k):
        for q in range(p + 1):
            c = coef[q, p]
            for r in range(n):
                out[r, p] += c * parts[r, q]
    return out
