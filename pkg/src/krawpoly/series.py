"""Dense multivariate polynomial arithmetic and the Gel'fand-Aomoto multi-sum."""

from __future__ import annotations

from math import factorial, fsum

import numpy as np

from .univariate import pochhammer

__all__ = ["linear_form_product", "gelfand_aomoto", "coefficient_table"]


def _times_linear(poly: np.ndarray, coeffs) -> np.ndarray:
    """Multiply by ``1 + sum_k coeffs[k] z_k``, dropping terms beyond the array size."""
    out = poly.copy()
    for k, c in enumerate(coeffs):
        if c == 0.0:
            continue
        dst = [slice(None)] * poly.ndim
        src = [slice(None)] * poly.ndim
        dst[k] = slice(1, None)
        src[k] = slice(None, -1)
        out[tuple(dst)] += c * poly[tuple(src)]
    return out


def linear_form_product(factors, d: int, N: int) -> np.ndarray:
    """Coefficients of ``prod (1 + sum_k c_k z_k)^e`` for ``(c, e)`` in ``factors``.

    Returns an array of shape ``(N+1,)*d`` whose entry ``[n_1, ..., n_d]`` is
    the coefficient of ``z_1^{n_1} ... z_d^{n_d}``; exponents must sum to at
    most N so nothing is truncated.
    """
    poly = np.zeros((N + 1,) * d)
    poly[(0,) * d] = 1.0
    for coeffs, power in factors:
        for _ in range(power):
            poly = _times_linear(poly, coeffs)
    return poly


def coefficient_table(poly: np.ndarray, degrees) -> np.ndarray:
    return np.array([poly[tuple(n)] for n in degrees])


def _bounded_matrices(d: int, row_caps, col_caps):
    """Non-negative integer d x d matrices with row sums <= row_caps, column sums <= col_caps."""
    cells = [(a, b) for a in range(d) for b in range(d)]

    def rec(pos, rows, cols, current):
        if pos == len(cells):
            yield dict(current)
            return
        a, b = cells[pos]
        limit = min(row_caps[a] - rows[a], col_caps[b] - cols[b])
        for v in range(limit + 1):
            rows[a] += v
            cols[b] += v
            current[(a, b)] = v
            yield from rec(pos + 1, rows, cols, current)
            rows[a] -= v
            cols[b] -= v
        current.pop((a, b), None)

    yield from rec(0, [0] * d, [0] * d, {})


def gelfand_aomoto(degree, variable, omega, N: int) -> float:
    """Explicit multi-sum for the Q polynomial with ``omega = 1 - u``.

    Sums over d x d matrices ``a``; column sums pair with the degrees and row
    sums with the variables::

        prod_j (-degree_j)_{col_j} prod_i (-variable_i)_{row_i}
        / (-N)_{|a|} * prod_ij omega_ij^{a_ij} / a_ij!

    Terms with a column (row) sum exceeding the corresponding degree
    (variable) vanish, so they are never generated.
    """
    d = len(degree)
    omega = np.asarray(omega, dtype=float)
    terms = []
    for a in _bounded_matrices(d, variable, degree):
        total = sum(a.values())
        if total > N:
            continue
        cols = [sum(a[(i, j)] for i in range(d)) for j in range(d)]
        rows = [sum(a[(i, j)] for j in range(d)) for i in range(d)]
        num = 1
        for j in range(d):
            num *= pochhammer(-int(degree[j]), cols[j])
        for i in range(d):
            num *= pochhammer(-int(variable[i]), rows[i])
        den = pochhammer(-N, total)
        for v in a.values():
            den *= factorial(v)
        w = 1.0
        for (i, j), v in a.items():
            if v:
                w *= omega[i, j] ** v
        terms.append(num / den * w)
    return fsum(terms)
