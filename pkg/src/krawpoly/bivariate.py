"""Bivariate Krawtchouk polynomials attached to a 3x3 rotation.

The level-N representation matrix factors as
``<i,k| U(R) |m,n> = W_{i,k;N} P_{m,n}(i,k;N)``.  This module computes W, the
orthonormal polynomials P and the origin-normalised polynomials Q along
several independent routes (raising relations, operator oracle, generating
function, explicit multi-sum) and evaluates the residuals of the identities
they satisfy.

Index conventions: ``(m, n)`` are degrees, ``(i, k)`` are grid variables, and
rotation entries are written one-based, ``R13 = R[0, 2]``.
"""

from __future__ import annotations

from math import lgamma, log, exp, sqrt

import numpy as np

from .errors import DomainError, InconsistencyError, InputError
from .family import EPS_GEN, KrawtchoukFamily, check_table_size, multinomial, require_generic
from .fock_basis import enumerate_basis
from .oracle import RepresentationMatrix, representation_matrix
from .rotations import check_rotation
from .series import gelfand_aomoto, linear_form_product

__all__ = [
    "P_to_Q",
    "Q_to_P",
    "Q_via_generating",
    "Q_via_hypergeometric",
    "amplitude",
    "amplitude_vector",
    "build_P_oracle",
    "build_P_raising",
    "build_P_raising_levels",
    "difference_residual_Q",
    "duality_check",
    "factorization_residual",
    "lowering_residual",
    "orthonormality_residual",
    "raising_residual",
    "recurrence_residual_P",
    "recurrence_residual_Q",
    "trinomial",
    "u_matrix",
    "weight",
]

_COLUMN3 = ("R13", "R23", "R33")
_ROW3 = ("R31", "R32", "R33")
_U_ENTRIES = ("R13", "R23", "R31", "R32", "R33")


def _rotation3(R) -> np.ndarray:
    R = check_rotation(R, tol=1e-10)
    if R.shape != (3, 3):
        raise InputError(f"bivariate routes need a 3x3 rotation, got {R.shape}")
    return R


def trinomial(N: int, a: int, b: int) -> int:
    return multinomial(N, (a, b))


def _check_point(N, i, k):
    if i < 0 or k < 0 or i + k > N:
        raise InputError(f"({i}, {k}) is not a point of level N={N}")


def _signed_power_product(bases, exponents, log_prefactor=0.0) -> float:
    sign = 1.0
    log_mag = log_prefactor
    for b, e in zip(bases, exponents):
        if e == 0:
            continue
        if b == 0.0:
            return 0.0
        if b < 0 and e % 2:
            sign = -sign
        log_mag += e * log(abs(b))
    return sign * exp(log_mag)


def _log_multinomial(N, idx) -> float:
    return lgamma(N + 1) - sum(lgamma(v + 1) for v in idx) - lgamma(N - sum(idx) + 1)


def amplitude(R, N: int, i: int, k: int) -> float:
    """``W_{i,k;N} = R13^i R23^k R33^(N-i-k) sqrt(N! / (i! k! (N-i-k)!))``.

    Evaluated as sign times exp of a sum of logarithms, so it stays finite for
    large N.
    """
    R = np.asarray(R, dtype=float)
    _check_point(N, i, k)
    return _signed_power_product(
        (R[0, 2], R[1, 2], R[2, 2]), (i, k, N - i - k), 0.5 * _log_multinomial(N, (i, k))
    )


def amplitude_vector(R, N: int) -> np.ndarray:
    """All amplitudes of level N in basis order."""
    return np.array([amplitude(R, N, i, k) for i, k in enumerate_basis(2, N)])


def weight(R, N: int, i: int, k: int) -> float:
    """Trinomial weight ``w_{i,k;N} = W_{i,k;N}^2``."""
    R = np.asarray(R, dtype=float)
    _check_point(N, i, k)
    return _signed_power_product(
        (R[0, 2] ** 2, R[1, 2] ** 2, R[2, 2] ** 2), (i, k, N - i - k), _log_multinomial(N, (i, k))
    )


def _family_from_array(R, N, kind, route, arr) -> KrawtchoukFamily:
    basis = enumerate_basis(2, N)
    vals = np.empty((len(basis), len(basis)))
    for r, (m, n) in enumerate(basis):
        for c, (i, k) in enumerate(basis):
            vals[r, c] = arr[m, n, i, k]
    return KrawtchoukFamily(np.array(R, dtype=float), N, kind, route, vals)


def _raise_level(R, prev: np.ndarray, L: int) -> np.ndarray:
    """Level-L table [m, n, i, k] from the level-(L-1) table."""
    new = np.zeros((L + 1,) * 4)
    new[0, 0, :, :] = 1.0
    ratios = [[R[a, col] / R[a, 2] for a in range(3)] for col in (0, 1)]
    for m in range(L + 1):
        for n in range(L + 1 - m):
            if m == n == 0:
                continue
            if m >= 1:
                src, col, scale = prev[m - 1, n], 0, sqrt(L * m)
            else:
                src, col, scale = prev[0, n - 1], 1, sqrt(L * n)
            r1, r2, r3 = ratios[col]
            for i in range(L + 1):
                for k in range(L + 1 - i):
                    acc = 0.0
                    if i:
                        acc += r1 * i * src[i - 1, k]
                    if k:
                        acc += r2 * k * src[i, k - 1]
                    if L - i - k:
                        acc += r3 * (L - i - k) * src[i, k]
                    new[m, n, i, k] = acc / scale
    return new


def build_P_raising_levels(R, N: int) -> list[KrawtchoukFamily]:
    """P tables for every level 0..N, each raised from the one below."""
    R = _rotation3(R)
    check_table_size(2, N)
    require_generic(R, _COLUMN3, "raising")
    arr = np.ones((1, 1, 1, 1))
    out = [_family_from_array(R, 0, "P", "raising", arr)]
    for L in range(1, N + 1):
        arr = _raise_level(R, arr, L)
        out.append(_family_from_array(R, L, "P", "raising", arr))
    return out


def build_P_raising(R, N: int) -> KrawtchoukFamily:
    """P table of level N from ``P_{0,0} = 1`` through the two raising relations.

    Raises :class:`~krawpoly.errors.NonGenericRotationError` when R13, R23
    or R33 vanishes.
    """
    return build_P_raising_levels(R, N)[-1]


def build_P_oracle(R, N: int, rep: RepresentationMatrix | None = None, tol: float = 1e-12) -> KrawtchoukFamily:
    """P as representation matrix element divided by the amplitude.

    A grid point with vanishing amplitude but non-zero matrix elements means
    the factorization itself fails and raises
    :class:`~krawpoly.errors.InconsistencyError`.  Since the rows of an
    orthogonal U never vanish, this happens whenever some amplitude is zero,
    i.e. whenever R13, R23 or R33 vanishes.  (A zero row, possible only for a
    non-orthogonal ``rep``, gives NaN entries.)
    """
    R = _rotation3(R)
    if rep is None:
        rep = representation_matrix(R, N=N)
    elif rep.N != N or rep.d != 2:
        raise InputError("representation matrix belongs to another level")
    W = amplitude_vector(R, N)
    vals = np.empty_like(rep.U)
    for c, w in enumerate(W):
        column = rep.U[c, :]  # <i,k| U |m,n> for all (m, n)
        if abs(w) > 0.0:
            vals[:, c] = column / w
        elif np.max(np.abs(column)) > tol:
            raise InconsistencyError(f"amplitude vanishes at grid point {rep.basis.unrank(c)} but matrix elements do not")
        else:
            vals[:, c] = np.nan
    return KrawtchoukFamily(R, N, "P", "oracle", vals)


def _pq_scale(R, N) -> np.ndarray:
    basis = enumerate_basis(2, N)
    a, b = R[2, 0] / R[2, 2], R[2, 1] / R[2, 2]
    return np.array([sqrt(trinomial(N, m, n)) * a**m * b**n for m, n in basis])


def P_to_Q(family: KrawtchoukFamily) -> KrawtchoukFamily:
    """Divide each degree row by ``sqrt(N!/(m!n!(N-m-n)!)) (R31/R33)^m (R32/R33)^n``."""
    if family.kind != "P":
        raise InputError("P_to_Q expects a P family")
    require_generic(family.R, _ROW3, "P_to_Q")
    scale = _pq_scale(family.R, family.N)
    return KrawtchoukFamily(family.R, family.N, "Q", family.route, family.values / scale[:, None])


def Q_to_P(family: KrawtchoukFamily) -> KrawtchoukFamily:
    if family.kind != "Q":
        raise InputError("Q_to_P expects a Q family")
    scale = _pq_scale(family.R, family.N)
    return KrawtchoukFamily(family.R, family.N, "P", family.route, family.values * scale[:, None])


def u_matrix(R) -> np.ndarray:
    """``u[j, k] = R_jk R_33 / (R_j3 R_3k)`` for j, k in {1, 2} (0-based array)."""
    R = np.asarray(R, dtype=float)
    require_generic(R, _U_ENTRIES, "u-parameter")
    return np.array([[R[j, k] * R[2, 2] / (R[j, 2] * R[2, k]) for k in range(2)] for j in range(2)])


def Q_via_generating(R, N: int) -> KrawtchoukFamily:
    """Q from the coefficients of
    ``(1 + u11 z1 + u12 z2)^i (1 + u21 z1 + u22 z2)^k (1 + z1 + z2)^(N-i-k)``.
    """
    R = _rotation3(R)
    check_table_size(2, N)
    u = u_matrix(R)
    basis = enumerate_basis(2, N)
    vals = np.empty((len(basis), len(basis)))
    for c, (i, k) in enumerate(basis):
        poly = linear_form_product([(u[0], i), (u[1], k), ((1.0, 1.0), N - i - k)], 2, N)
        for r, (m, n) in enumerate(basis):
            vals[r, c] = poly[m, n] / trinomial(N, m, n)
    return KrawtchoukFamily(R, N, "Q", "generating", vals)


def Q_via_hypergeometric(R, N: int) -> KrawtchoukFamily:
    """Q from the explicit quadruple sum in ``1 - u_jk``."""
    R = _rotation3(R)
    check_table_size(2, N)
    omega = 1.0 - u_matrix(R)
    basis = enumerate_basis(2, N)
    vals = np.empty((len(basis), len(basis)))
    for r, deg in enumerate(basis):
        for c, var in enumerate(basis):
            vals[r, c] = gelfand_aomoto(deg, var, omega, N)
    return KrawtchoukFamily(R, N, "Q", "hypergeometric", vals)


# -- residuals ---------------------------------------------------------------


def _sum_terms(family: KrawtchoukFamily, terms) -> float:
    """``sum coef * f(degree, variable)``; off-simplex terms must carry a zero coefficient."""
    b = family.basis
    total = 0.0
    for coef, deg, var in terms:
        if deg in b and var in b:
            total += coef * family.values[b.rank(deg), b.rank(var)]
        elif coef != 0.0:
            raise DomainError(f"non-zero coefficient {coef!r} on off-simplex term {deg}, {var}")
    return total


def orthonormality_residual(family: KrawtchoukFamily) -> float:
    """``max |sum_x w(x) P_a(x) P_b(x) - delta_ab|`` over all degree pairs."""
    if family.kind != "P":
        raise InputError("orthonormality is stated for P families")
    w = amplitude_vector(family.R, family.N) ** 2
    G = (family.values * w) @ family.values.T
    return float(np.max(np.abs(G - np.eye(len(G)))))


def factorization_residual(family: KrawtchoukFamily, rep: RepresentationMatrix | None = None) -> float:
    """``max |<x| U |a> - W_x P_a(x)|`` against the oracle."""
    if family.kind != "P":
        raise InputError("factorization is stated for P families")
    if rep is None:
        rep = representation_matrix(family.R, N=family.N)
    W = amplitude_vector(family.R, family.N)
    return float(np.max(np.abs(rep.U - W[:, None] * family.values.T)))


def recurrence_residual_Q(family: KrawtchoukFamily, which: int, m: int, n: int, i: int, k: int) -> float:
    """Residual of the recurrence in the degrees that multiplies Q by i (which=1) or k (which=2)."""
    if family.kind != "Q":
        raise InputError("expects a Q family")
    return _recurrence_Q(family.R, family, family.N, which, m, n, i, k)


def _recurrence_Q(R, family, N, which, m, n, i, k) -> float:
    a = which - 1
    if a not in (0, 1):
        raise InputError("which must be 1 or 2")
    Ra1, Ra2, Ra3 = R[a, 0], R[a, 1], R[a, 2]
    R31, R32, R33 = R[2, 0], R[2, 1], R[2, 2]
    L = N - m - n
    lhs = (i, k)[a] * _sum_terms(family, [(1.0, (m, n), (i, k))])
    rhs = _sum_terms(
        family,
        [
            (Ra1**2 * m + Ra2**2 * n + Ra3**2 * L, (m, n), (i, k)),
            (Ra1 * Ra2 * R32 / R31 * m, (m - 1, n + 1), (i, k)),
            (Ra1 * Ra2 * R31 / R32 * n, (m + 1, n - 1), (i, k)),
            (Ra1 * Ra3 * R33 / R31 * m, (m - 1, n), (i, k)),
            (Ra1 * Ra3 * R31 / R33 * L, (m + 1, n), (i, k)),
            (Ra2 * Ra3 * R33 / R32 * n, (m, n - 1), (i, k)),
            (Ra2 * Ra3 * R32 / R33 * L, (m, n + 1), (i, k)),
        ],
    )
    return lhs - rhs


def difference_residual_Q(family: KrawtchoukFamily, which: int, m: int, n: int, i: int, k: int) -> float:
    """Residual of the difference equation in the variables with eigenvalue m (which=1) or n (which=2)."""
    if family.kind != "Q":
        raise InputError("expects a Q family")
    a = which - 1
    if a not in (0, 1):
        raise InputError("which must be 1 or 2")
    R = family.R
    R1a, R2a, R3a = R[0, a], R[1, a], R[2, a]
    R13, R23, R33 = R[0, 2], R[1, 2], R[2, 2]
    L = family.N - i - k
    lhs = (m, n)[a] * _sum_terms(family, [(1.0, (m, n), (i, k))])
    rhs = _sum_terms(
        family,
        [
            (R1a**2 * i + R2a**2 * k + R3a**2 * L, (m, n), (i, k)),
            (R1a * R2a * R23 / R13 * i, (m, n), (i - 1, k + 1)),
            (R1a * R2a * R13 / R23 * k, (m, n), (i + 1, k - 1)),
            (R1a * R3a * R33 / R13 * i, (m, n), (i - 1, k)),
            (R1a * R3a * R13 / R33 * L, (m, n), (i + 1, k)),
            (R2a * R3a * R33 / R23 * k, (m, n), (i, k - 1)),
            (R2a * R3a * R23 / R33 * L, (m, n), (i, k + 1)),
        ],
    )
    return lhs - rhs


def recurrence_residual_P(family: KrawtchoukFamily, which: int, m: int, n: int, i: int, k: int) -> float:
    """Residual of the recurrence for the orthonormal P (square-root coefficients)."""
    if family.kind != "P":
        raise InputError("expects a P family")
    a = which - 1
    if a not in (0, 1):
        raise InputError("which must be 1 or 2")
    R = family.R
    Ra1, Ra2, Ra3 = R[a, 0], R[a, 1], R[a, 2]
    L = family.N - m - n
    lhs = (i, k)[a] * _sum_terms(family, [(1.0, (m, n), (i, k))])
    rhs = _sum_terms(
        family,
        [
            (Ra1**2 * m + Ra2**2 * n + Ra3**2 * L, (m, n), (i, k)),
            (Ra1 * Ra2 * sqrt(m * (n + 1)), (m - 1, n + 1), (i, k)),
            (Ra1 * Ra2 * sqrt(n * (m + 1)), (m + 1, n - 1), (i, k)),
            (Ra1 * Ra3 * sqrt(m * (L + 1)), (m - 1, n), (i, k)),
            (Ra1 * Ra3 * sqrt((m + 1) * L), (m + 1, n), (i, k)),
            (Ra2 * Ra3 * sqrt(n * (L + 1)), (m, n - 1), (i, k)),
            (Ra2 * Ra3 * sqrt((n + 1) * L), (m, n + 1), (i, k)),
        ],
    )
    return lhs - rhs


def raising_residual(
    lower: KrawtchoukFamily, upper: KrawtchoukFamily, which: int, m: int, n: int, i: int, k: int
) -> float:
    """Residual of the raising relation producing degree ``(m, n)`` of level N+1
    (``upper``) from degree ``(m-1, n)`` (which=1) or ``(m, n-1)`` (which=2) of
    level N (``lower``), at the level-(N+1) point ``(i, k)``.

    At ``m = 0`` (resp. ``n = 0``) the left side vanishes and the lowered
    degree does not exist; its terms are taken as zero.
    """
    if lower.kind != "P" or upper.kind != "P" or upper.N != lower.N + 1:
        raise InputError("raising relations link P tables at levels N and N+1")
    a = which - 1
    if a not in (0, 1):
        raise InputError("which must be 1 or 2")
    R = upper.R
    L = upper.N
    lhs = sqrt(L * (m, n)[a]) * _sum_terms(upper, [(1.0, (m, n), (i, k))])
    lowered = (m - 1, n) if a == 0 else (m, n - 1)
    if min(lowered) < 0:
        return lhs
    rhs = _sum_terms(
        lower,
        [
            (R[0, a] / R[0, 2] * i, lowered, (i - 1, k)),
            (R[1, a] / R[1, 2] * k, lowered, (i, k - 1)),
            (R[2, a] / R[2, 2] * (L - i - k), lowered, (i, k)),
        ],
    )
    return lhs - rhs


def lowering_residual(
    lower: KrawtchoukFamily, upper: KrawtchoukFamily, which: int, m: int, n: int, i: int, k: int
) -> float:
    """Residual of the lowering relation linking level N (``lower``) to level N+1 (``upper``).

    ``(m, n)`` is a degree of level N+1 and ``(i, k)`` a point of level N.
    """
    if lower.kind != "P" or upper.kind != "P" or upper.N != lower.N + 1:
        raise InputError("lowering relations link P tables at levels N and N+1")
    a = which - 1
    if a not in (0, 1):
        raise InputError("which must be 1 or 2")
    R = upper.R
    alpha = R[0, a] * R[0, 2]
    beta = R[1, a] * R[1, 2]
    N = lower.N
    deg = (m, n)
    lowered = (m - 1, n) if a == 0 else (m, n - 1)
    lhs = _sum_terms(lower, [(sqrt((m, n)[a] / (N + 1)), lowered, (i, k))])
    rhs = _sum_terms(
        upper,
        [
            (alpha, deg, (i + 1, k)),
            (-alpha - beta, deg, (i, k)),
            (beta, deg, (i, k + 1)),
        ],
    )
    return lhs - rhs


def duality_check(R, N: int, route: str = "generating") -> float:
    """``max |Q^(R)_{i,k}(m,n;N) - Q^(R^T)_{m,n}(i,k;N)|`` over all index pairs."""
    R = _rotation3(R)
    build = {"generating": Q_via_generating, "hypergeometric": Q_via_hypergeometric}[route]
    q = build(R, N).values
    qt = build(R.T, N).values
    return float(np.max(np.abs(q - qt.T)))
