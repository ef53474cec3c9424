"""One-variable Krawtchouk and Hermite polynomials, and plane-rotation matrix elements."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import comb, cos, factorial, prod, sin, sqrt, tan

import numpy as np

from .errors import DomainError, InputError

__all__ = [
    "UniKrawtchoukParams",
    "hermite",
    "kraw",
    "monic_kraw",
    "pochhammer",
    "plane_matrix_element_xz",
    "plane_matrix_element_yz",
    "plane_level_matrix",
]

DEGENERATE_TRIG = 1e-8


def pochhammer(a, k: int):
    """Rising factorial ``(a)_k = a (a+1) ... (a+k-1)``, with ``(a)_0 = 1``.

    Integer ``a`` gives an exact integer.
    """
    if k < 0:
        raise DomainError(f"Pochhammer index must be >= 0, got {k}")
    if isinstance(a, (int, np.integer)):
        return prod(range(int(a), int(a) + k))
    out = 1.0
    for j in range(k):
        out *= a + j
    return out


@dataclass(frozen=True)
class UniKrawtchoukParams:
    p: float
    J: int

    def __post_init__(self):
        if not 0.0 < self.p < 1.0:
            raise InputError(f"p must lie in (0, 1), got {self.p}")
        if self.J < 0:
            raise InputError(f"J must be >= 0, got {self.J}")


def kraw(n: int, x: float, p: float, J: int, *, strict: bool = True) -> float:
    """Krawtchouk polynomial ``k_n(x; p; J) = (-J)_n 2F1(-n, -x; -J; 1/p)``.

    Grid points ``x = 0..J`` with ``n <= J`` use the finite sum of
    :func:`_kraw_grid`, which is stable for every p.  Elsewhere the series
    is summed with the ratio ``(-J)_n / (-J)_k = (k - J)_{n-k}``
    folded into each term, which keeps every term finite.  With
    ``strict=False`` this polynomial continuation in J is also used for
    ``n > J`` (needed where products of Krawtchouk polynomials are evaluated
    at grid points with ``n > J``); otherwise that case raises.
    """
    if n < 0:
        raise DomainError(f"degree must be >= 0, got {n}")
    if strict and n > J:
        raise DomainError(f"k_n(x; p; J) needs n <= J, got n={n}, J={J}")
    if p == 0.0:
        raise DomainError("p = 0 makes 1/p infinite")
    if n <= J and float(x).is_integer() and 0 <= x <= J:
        return _kraw_grid(n, int(x), p, J)
    # term_k = (-n)_k (-x)_k / k! * p^{-k}; tail_k = (k - J)_{n - k}
    total = 0.0
    term = 1.0
    for k in range(n + 1):
        total += term * pochhammer(k - J, n - k)
        term *= (k - n) * (k - x) / ((k + 1) * p)
        if term == 0.0:
            break
    return float(total)


def _kraw_grid(n: int, x: int, p: float, J: int) -> float:
    """``k_n(x; p; J)`` at a grid point, from the generating function
    ``sum_n C(J, n) k_n t^n / (-J)_n = (1 - t (1-p)/p)^x (1 + t)^(J-x)``::

        k_n(x) = (-1)^n n! sum_j C(x, j) C(J-x, n-j) (-(1-p)/p)^j

    The hypergeometric series in 1/p cancels badly for p near 1 (relative
    error 1e-4 at J = 12, p = 0.93); this sum stays at roundoff level.
    """
    r = -(1.0 - p) / p
    total = 0.0
    for j in range(max(0, n - (J - x)), min(n, x) + 1):
        total += comb(x, j) * comb(J - x, n - j) * r**j
    return float((-1) ** n * factorial(n) * total)


def monic_kraw(n: int, x: float, p: float, J: int, *, strict: bool = True) -> float:
    """Monic Krawtchouk polynomial ``q_n(x) = p^n k_n(x; p; J)``."""
    return p**n * kraw(n, x, p, J, strict=strict)


def hermite(n: int, x):
    """Physicists' Hermite polynomial ``H_n(x)`` (weight ``exp(-x^2)``); vectorised in x."""
    if n < 0:
        raise DomainError(f"degree must be >= 0, got {n}")
    x = np.asarray(x, dtype=float)
    h_prev = np.ones_like(x)
    if n == 0:
        return h_prev if h_prev.ndim else float(h_prev)
    h = 2.0 * x
    for j in range(1, n):
        h_prev, h = h, 2.0 * x * h - 2.0 * j * h_prev
    return h if h.ndim else float(h)


def _check_level(N: int, *pairs):
    for a, b in pairs:
        if a < 0 or b < 0 or a + b > N:
            raise InputError(f"({a}, {b}) is not a state of level N={N}")


def _root_ratio(J: int, a: int, n: int) -> float:
    # sqrt((-1)^n J! / (a! n! (J-a)! (-J)_n)); (-1)^n / (-J)_n = (J-n)! / J!
    return sqrt(factorial(J - n) / (factorial(a) * factorial(n) * factorial(J - a)))


def plane_matrix_element_yz(theta: float, N: int, bra, ket) -> float:
    """``<i,k| U_yz(theta) |m,n>`` on level N in closed form.

    Degenerate angles (``sin`` or ``cos`` below 1e-8) are evaluated from the
    oracle instead of the tan-factored expression.
    """
    i, k = bra
    m, n = ket
    _check_level(N, bra, ket)
    if abs(sin(theta)) < DEGENERATE_TRIG or abs(cos(theta)) < DEGENERATE_TRIG:
        return _degenerate_plane((2, 3), theta, N, bra, ket)
    if i != m:
        return 0.0
    J = N - i
    t = tan(theta)
    return _root_ratio(J, k, n) * cos(theta) ** J * t ** (k + n) * kraw(n, k, sin(theta) ** 2, J)


def plane_matrix_element_xz(chi: float, N: int, bra, ket) -> float:
    """``<i,k| U_xz(chi) |m,n>`` on level N in closed form."""
    i, k = bra
    m, n = ket
    _check_level(N, bra, ket)
    if abs(sin(chi)) < DEGENERATE_TRIG or abs(cos(chi)) < DEGENERATE_TRIG:
        return _degenerate_plane((1, 3), chi, N, bra, ket)
    if k != n:
        return 0.0
    J = N - n
    t = tan(chi)
    sign = -1.0 if (i + m) % 2 else 1.0
    return sign * _root_ratio(J, i, m) * cos(chi) ** J * t ** (i + m) * kraw(m, i, sin(chi) ** 2, J)


def _degenerate_plane(axes, angle, N, bra, ket) -> float:
    if angle == 0.0:
        return float(tuple(bra) == tuple(ket))
    U, basis = _oracle_plane(tuple(axes), float(angle), N)
    return float(U[basis.rank(bra), basis.rank(ket)])


@lru_cache(maxsize=64)
def _oracle_plane(axes, angle, N):
    from .oracle import representation_matrix
    from .rotations import plane_generator

    rep = representation_matrix(generator=plane_generator(3, axes, angle), N=N)
    rep.U.setflags(write=False)
    return rep.U, rep.basis


def plane_level_matrix(axes: tuple[int, int], angle: float, N: int) -> np.ndarray:
    """Full level-N matrix of a plane rotation built from the closed forms."""
    from .fock_basis import enumerate_basis

    basis = enumerate_basis(2, N)
    element = {(2, 3): plane_matrix_element_yz, (1, 3): plane_matrix_element_xz}[tuple(axes)]
    M = np.empty((len(basis), len(basis)))
    for r, bra in enumerate(basis):
        for c, ket in enumerate(basis):
            M[r, c] = element(angle, N, bra, ket)
    return M
