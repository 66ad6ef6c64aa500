"""Vectorised numpy implementations of the inner loops.

Every function here has a loop-for-loop twin in ``_kernels_numba``; the two
must agree to roundoff.
"""
import numpy as np


def divided_difference_table(values, nodes):
    # values[i] = P(nodes[i]); table[j, i] = P[nodes[j], ..., nodes[i]] for j <= i
    k = values.shape[0]
    table = np.zeros((k, k) + values.shape[1:], dtype=np.complex128)
    idx = np.arange(k)
    table[idx, idx] = values
    for t in range(1, k):
        j = np.arange(k - t)
        gaps = nodes[j] - nodes[j + t]
        table[j, j + t] = (table[j, j + t - 1] - table[j + 1, j + t]) / gaps[:, None, None]
    return table


def assemble_blocks(table, gamma):
    k, _, n, _ = table.shape
    out = np.zeros((k, n, k, n), dtype=np.complex128)
    for d in range(k):
        j = np.arange(k - d)
        out[j + d, :, j, :] = gamma**d * table[j, j + d]
    return out.reshape(k * n, k * n)


def varpi_table(weights, nodes):
    # table[j, i] = varpi[nodes[j], ..., nodes[i]] for j <= i
    k = nodes.shape[0]
    powers = np.arange(weights.shape[0])
    table = np.zeros((k, k))
    idx = np.arange(k)
    table[idx, idx] = np.abs(nodes)[:, None] ** powers @ weights
    if k > 1:
        a, b = nodes[:-1], nodes[1:]
        diffs = np.abs(a[:, None] ** powers - b[:, None] ** powers)
        table[idx[:-1], idx[1:]] = diffs @ weights / np.abs(a - b)
    for t in range(2, k):
        j = np.arange(k - t)
        table[j, j + t] = (table[j, j + t - 1] + table[j + 1, j + t]) / np.abs(nodes[j] - nodes[j + t])
    return table


def assemble_lower(table, gamma):
    k = table.shape[0]
    i, j = np.tril_indices(k)
    out = np.zeros((k, k))
    out[i, j] = gamma ** (i - j).astype(float) * table[j, i]
    return out


def theta_matrix(nodes, gamma):
    gaps = nodes[:, None] - nodes[None, :]
    np.fill_diagonal(gaps, 1.0)
    theta = gamma / gaps
    np.fill_diagonal(theta, 0.0)
    return theta


def hat_coefficients(nodes, gamma):
    # column p holds the weights of parts[:, 0..p] in the p-th hat vector
    k = nodes.shape[0]
    theta = theta_matrix(nodes, gamma)
    coef = np.eye(k, dtype=np.complex128)
    for p in range(1, k):
        # prod_{j=p-i}^{p-1} theta[j, p] for i = 1..p, accumulated from j = p-1 downward
        prods = np.cumprod(theta[p - 1::-1, p])
        signs = (-1.0) ** np.arange(1, p + 1)
        coef[p - 1::-1, p] = signs * prods
    return coef


def hat_combine(parts, nodes, gamma):
    return parts @ hat_coefficients(nodes, gamma)
