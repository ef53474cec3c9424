"""Hermite-function channel: the expansion of rotated Hermite products in the
bivariate polynomials, and the triple-integral representation of P evaluated
by tensor-product Gauss-Hermite quadrature.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from functools import lru_cache
from math import factorial, pi, sqrt

import numpy as np

from .bivariate import build_P_raising
from .errors import InputError
from .family import KrawtchoukFamily
from .fock_basis import enumerate_basis
from .univariate import hermite

__all__ = [
    "MAX_ORDER",
    "IntegralResult",
    "QuadratureRule",
    "P_via_integral",
    "gauss_hermite",
    "hermite_expansion_residual",
]

MAX_ORDER = 32


@dataclass(frozen=True)
class QuadratureRule:
    """Gauss-Hermite rule for the weight ``exp(-x^2)``; exact up to degree ``2*order - 1``."""

    order: int
    nodes: np.ndarray = field(repr=False)
    weights: np.ndarray = field(repr=False)


@lru_cache(maxsize=None)
def gauss_hermite(order: int) -> QuadratureRule:
    """Nodes and weights from the eigen-decomposition of the Jacobi matrix.

    The Hermite recurrence gives a symmetric tridiagonal matrix with
    off-diagonal ``sqrt(j/2)``; its eigenvalues are the nodes and the squared
    first components of the eigenvectors, times ``sqrt(pi)``, the weights.
    """
    if not 1 <= order <= MAX_ORDER:
        raise InputError(f"quadrature order must be in 1..{MAX_ORDER}, got {order}")
    off = np.sqrt(np.arange(1, order) / 2.0)
    J = np.diag(off, 1) + np.diag(off, -1)
    nodes, vecs = np.linalg.eigh(J)
    weights = sqrt(pi) * vecs[0, :] ** 2
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return QuadratureRule(order, nodes, weights)


def hermite_expansion_residual(R, N: int, m: int, n: int, point, family: KrawtchoukFamily | None = None) -> float:
    """Residual of

        sqrt(1/(N! m! n! (N-m-n)!)) H_m(y1) H_n(y2) H_{N-m-n}(y3)
          = sum_{i+k<=N} R13^i R23^k R33^(N-i-k) / (i! k! (N-i-k)!) P_{m,n}(i,k;N)
                         H_i(x1) H_k(x2) H_{N-i-k}(x3)

    with ``y = R^T x``.  ``family`` is the level-N P table of R; it is built
    by the raising route when omitted.
    """
    R = np.asarray(R, dtype=float)
    if family is None:
        family = build_P_raising(R, N)
    if family.kind != "P" or family.d != 2 or family.N != N:
        raise InputError("expects the bivariate P family of level N")
    x = np.asarray(point, dtype=float)
    y = R.T @ x
    L = N - m - n
    if m < 0 or n < 0 or L < 0:
        raise InputError(f"degree ({m}, {n}) outside level N={N}")
    lhs = hermite(m, y[0]) * hermite(n, y[1]) * hermite(L, y[2]) / sqrt(
        factorial(N) * factorial(m) * factorial(n) * factorial(L)
    )
    rhs = 0.0
    for i, k in enumerate_basis(2, N):
        j = N - i - k
        coef = R[0, 2] ** i * R[1, 2] ** k * R[2, 2] ** j / (factorial(i) * factorial(k) * factorial(j))
        rhs += coef * family(m, n, i, k) * hermite(i, x[0]) * hermite(k, x[1]) * hermite(j, x[2])
    return float(lhs - rhs)


@dataclass(frozen=True)
class IntegralResult:
    value: float
    order: int
    exact: bool
    note: str = ""


def P_via_integral(R, N: int, m: int, n: int, i: int, k: int, order: int | None = None) -> IntegralResult:
    """``P_{m,n}(i,k;N)`` from its integral representation over R^3.

    The integrand is a polynomial of degree at most 2N in each coordinate
    times ``exp(-|x|^2)``, so ``order >= N + 1`` nodes per axis integrate it
    exactly.  A lower order still returns a value, flagged ``exact=False``
    with a warning.
    """
    R = np.asarray(R, dtype=float)
    if order is None:
        order = N + 1
    for a, b in ((m, n), (i, k)):
        if a < 0 or b < 0 or a + b > N:
            raise InputError(f"({a}, {b}) outside level N={N}")
    rule = gauss_hermite(order)
    exact = order >= N + 1
    note = ""
    if not exact:
        note = f"order {order} < N+1 = {N + 1}: quadrature is not exact for this integrand"
        warnings.warn(note, RuntimeWarning, stacklevel=2)
    x1, x2, x3 = np.meshgrid(rule.nodes, rule.nodes, rule.nodes, indexing="ij")
    w = rule.weights[:, None, None] * rule.weights[None, :, None] * rule.weights[None, None, :]
    y = np.einsum("ba,bxyz->axyz", R, np.stack([x1, x2, x3]))  # y = R^T x
    integrand = (
        hermite(m, y[0])
        * hermite(n, y[1])
        * hermite(N - m - n, y[2])
        * hermite(i, x1)
        * hermite(k, x2)
        * hermite(N - i - k, x3)
    )
    integral = float(np.sum(w * integrand))
    pref = R[0, 2] ** (-i) * R[1, 2] ** (-k) * R[2, 2] ** (i + k - N) / (2**N * pi**1.5)
    pref /= sqrt(factorial(N) * factorial(m) * factorial(n) * factorial(N - m - n))
    return IntegralResult(pref * integral, order, exact, note)
