"""Krawtchouk-Tratnik polynomials and their link to the general bivariate family.

The Tratnik polynomials are the special case of Q for rotations with
``R12 = 0``, i.e. products ``C(theta, chi) = R_yz(theta) R_xz(chi)``, with
parameters ``p1 = R13^2 = sin^2 chi`` and ``p2 = R23^2 = sin^2 theta cos^2 chi``.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import cos, factorial, sin, sqrt, tan

import numpy as np

from . import bivariate
from .errors import InputError, NonGenericRotationError
from .family import KrawtchoukFamily, genericity_report, scaled_deviation
from .fock_basis import enumerate_basis
from .oracle import representation_matrix
from .rotations import euler_product, plane_generator, plane_rotation
from .univariate import kraw, plane_level_matrix, pochhammer

__all__ = [
    "AdditionResult",
    "ExpansionPrefactor",
    "TratnikParams",
    "addition_formula_residual",
    "entry_identities",
    "expand_Q_in_tratnik",
    "mirror_reduction_check",
    "reduction_check",
    "reduction_family",
    "tratnik_K2",
    "tratnik_params_from_angles",
    "tratnik_product_residual",
    "tratnik_recurrence_residuals",
    "tratnik_table",
    "tratnik_two_term_residual",
]

_DEGENERATE = 1e-8


@dataclass(frozen=True)
class TratnikParams:
    p1: float
    p2: float
    N: int

    def __post_init__(self):
        if not (self.p1 > 0 and self.p2 > 0 and self.p1 + self.p2 < 1):
            raise InputError(f"need p1, p2 > 0 and p1 + p2 < 1, got ({self.p1}, {self.p2})")
        if self.N < 0:
            raise InputError(f"N must be >= 0, got {self.N}")


def tratnik_params_from_angles(theta: float, chi: float, N: int) -> TratnikParams:
    return TratnikParams(sin(chi) ** 2, sin(theta) ** 2 * cos(chi) ** 2, N)


def tratnik_K2(m: int, n: int, i: int, k: int, params: TratnikParams) -> float:
    """``k_m(i; p1; N-n) k_n(k; p2/(1-p1); N-i) / (-N)_{m+n}``."""
    N = params.N
    if m < 0 or n < 0 or m + n > N or i < 0 or k < 0 or i + k > N:
        raise InputError(f"indices ({m}, {n}; {i}, {k}) outside level N={N}")
    p1, p2 = params.p1, params.p2
    first = kraw(m, i, p1, N - n)
    # n may exceed N - i on the grid; the polynomial continuation in J is used
    second = kraw(n, k, p2 / (1.0 - p1), N - i, strict=False)
    return first * second / pochhammer(-N, m + n)


def tratnik_table(params: TratnikParams) -> np.ndarray:
    """``K2`` for all degrees (rows) and grid points (columns) in basis order."""
    basis = enumerate_basis(2, params.N)
    return np.array([[tratnik_K2(m, n, i, k, params) for (i, k) in basis] for (m, n) in basis])


def _K2_or_zero(m, n, i, k, params, coef):
    N = params.N
    if m < 0 or n < 0 or m + n > N:
        if coef != 0.0:
            raise InputError(f"non-zero coefficient on off-simplex degree ({m}, {n})")
        return 0.0
    return coef * tratnik_K2(m, n, i, k, params)


def tratnik_recurrence_residuals(m: int, n: int, i: int, k: int, params: TratnikParams) -> tuple[float, float]:
    """Residuals of the two recurrences in the degrees (multiplying by i and by k)."""
    p1, p2, N = params.p1, params.p2, params.N
    K = lambda a, b, c=1.0: _K2_or_zero(a, b, i, k, params, c)  # noqa: E731
    q = 1.0 - p1
    r = 1.0 - p1 - p2
    L = N - m - n
    base = tratnik_K2(m, n, i, k, params)
    res_a = i * base - (
        K(m + 1, n, p1 * (m + n - N)) - p1 * (m + n - N) * base + q * m * base - K(m - 1, n, q * m)
    )
    res_b = k * base - (
        (p1 * p2 / q * m + r / q * n + p2 * L) * base
        + K(m - 1, n + 1, -p2 / q * m)
        + K(m + 1, n - 1, -p1 * r / q * n)
        + K(m - 1, n, p2 * m)
        + K(m + 1, n, p1 * p2 / q * L)
        + K(m, n - 1, -r * n)
        + K(m, n + 1, -p2 / q * L)
    )
    return res_a, res_b


def _check_angles(*angles):
    for a in angles:
        if abs(sin(a)) < _DEGENERATE or abs(cos(a)) < _DEGENERATE:
            raise InputError(f"angle {a} is a multiple of pi/2; the reduction degenerates")


def reduction_family(theta: float, chi: float, N: int) -> KrawtchoukFamily:
    """Q for ``C(theta, chi)`` computed through the oracle.

    The representation matrix is assembled from the two plane factors, so no
    logarithm of C is needed.
    """
    rep = representation_matrix(
        factors=[plane_generator(3, (2, 3), theta), plane_generator(3, (1, 3), chi)], N=N
    )
    C = plane_rotation(3, (2, 3), theta) @ plane_rotation(3, (1, 3), chi)
    rep = type(rep)(rep.basis, rep.U, C)
    return bivariate.P_to_Q(bivariate.build_P_oracle(C, N, rep=rep))


def _deviation(a, b, scaled):
    return scaled_deviation(a, b) if scaled else float(np.max(np.abs(a - b)))


def reduction_check(theta: float, chi: float, N: int, *, scaled: bool = False) -> float:
    """``max |Q^{C(theta,chi)} - K2|`` over all indices, with ``p1 = sin^2 chi``,
    ``p2 = sin^2 theta cos^2 chi``.

    Near the degenerate angles K2 reaches 1e14 at N = 6, where only the
    relative error means anything; ``scaled=True`` reports
    :func:`~krawpoly.family.scaled_deviation` instead.
    """
    _check_angles(theta, chi)
    Q = reduction_family(theta, chi, N)
    K = tratnik_table(tratnik_params_from_angles(theta, chi, N))
    return _deviation(Q.values, K, scaled)


def mirror_reduction_check(theta: float, chi: float, N: int, *, scaled: bool = False) -> float:
    """Same comparison for ``R_xz(chi) R_yz(theta)``, which has ``R21 = 0``.

    Exchanging the first two axes turns it into an ``R12 = 0`` rotation, so
    ``Q_{m,n}(i,k) = K2(n, m; k, i; R23^2, R13^2)``.
    """
    _check_angles(theta, chi)
    R = plane_rotation(3, (1, 3), chi) @ plane_rotation(3, (2, 3), theta)
    rep = representation_matrix(
        factors=[plane_generator(3, (1, 3), chi), plane_generator(3, (2, 3), theta)], N=N
    )
    rep = type(rep)(rep.basis, rep.U, R)
    Q = bivariate.P_to_Q(bivariate.build_P_oracle(R, N, rep=rep))
    params = TratnikParams(R[1, 2] ** 2, R[0, 2] ** 2, N)
    basis = enumerate_basis(2, N)
    K = np.array([[tratnik_K2(n, m, k, i, params) for (i, k) in basis] for (m, n) in basis])
    return _deviation(Q.values, K, scaled)


def tratnik_two_term_residual(family: KrawtchoukFamily, m: int, n: int, i: int, k: int) -> float:
    """Residual of the simplified first recurrence valid when ``R12 = 0``::

        i Q = R11^2 m (Q - Q_{m-1,n}) + R13^2 (N-m-n) (Q - Q_{m+1,n})
    """
    if family.kind != "Q":
        raise InputError("expects a Q family")
    R, N = family.R, family.N
    L = N - m - n
    return i * family(m, n, i, k) - bivariate._sum_terms(
        family,
        [
            (R[0, 0] ** 2 * m + R[0, 2] ** 2 * L, (m, n), (i, k)),
            (-R[0, 0] ** 2 * m, (m - 1, n), (i, k)),
            (-R[0, 2] ** 2 * L, (m + 1, n), (i, k)),
        ],
    )


def entry_identities(theta: float, chi: float) -> dict:
    """Squared entries of ``C(theta, chi)`` against their expressions in (p1, p2).

    Returns ``{name: (entry^2, formula)}``.
    """
    C = plane_rotation(3, (2, 3), theta) @ plane_rotation(3, (1, 3), chi)
    p1, p2 = C[0, 2] ** 2, C[1, 2] ** 2
    return {
        "R32^2": (C[2, 1] ** 2, p2 / (1 - p1)),
        "R22^2": (C[1, 1] ** 2, (1 - p1 - p2) / (1 - p1)),
        "R21^2": (C[1, 0] ** 2, p1 * p2 / (1 - p1)),
        "R11^2": (C[0, 0] ** 2, 1 - p1),
        "R33^2": (C[2, 2] ** 2, 1 - p1 - p2),
        "R31^2": (C[2, 0] ** 2, p1 * (1 - p1 - p2) / (1 - p1)),
    }


def tratnik_product_residual(theta: float, chi: float, N: int) -> float:
    """Compare ``U_yz(theta) U_xz(chi)`` built from the univariate closed forms
    with the same matrix built from K2 through the factorization of the product.
    """
    _check_angles(theta, chi)
    product = plane_level_matrix((2, 3), theta, N) @ plane_level_matrix((1, 3), chi, N)
    C = plane_rotation(3, (2, 3), theta) @ plane_rotation(3, (1, 3), chi)
    params = tratnik_params_from_angles(theta, chi, N)
    basis = enumerate_basis(2, N)
    c33 = C[2, 2]
    ratios = (C[0, 2] / c33, C[1, 2] / c33, C[2, 0] / c33, C[2, 1] / c33)
    M = np.empty_like(product)
    for r, (i, k) in enumerate(basis):
        for c, (m, n) in enumerate(basis):
            pref = factorial(N) * c33**N / sqrt(
                factorial(i) * factorial(k) * factorial(N - i - k) * factorial(m) * factorial(n) * factorial(N - m - n)
            )
            pref *= ratios[0] ** i * ratios[1] ** k * ratios[2] ** m * ratios[3] ** n
            M[r, c] = pref * tratnik_K2(m, n, i, k, params)
    return float(np.max(np.abs(M - product)))


@dataclass(frozen=True)
class ExpansionPrefactor:
    """Scalar prefactor of the expansion of Q in Tratnik polynomials."""

    value: float

    @classmethod
    def compute(cls, phi, theta, chi, N, m, n, i, k) -> "ExpansionPrefactor":
        R = euler_product((phi, theta, chi))
        C = plane_rotation(3, (2, 3), theta) @ plane_rotation(3, (1, 3), chi)
        value = (
            (-1) ** i
            * tan(phi) ** i
            * cos(phi) ** (N - k)
            * (C[2, 2] / R[2, 2]) ** N
            * (R[2, 2] / R[0, 2]) ** i
            * (C[1, 2] * R[2, 2] / (C[2, 2] * R[1, 2])) ** k
            * (C[2, 0] * R[2, 2] / (C[2, 2] * R[2, 0])) ** m
            * (C[2, 1] * R[2, 2] / (C[2, 2] * R[2, 1])) ** n
        )
        return cls(float(value))


def expand_Q_in_tratnik(phi: float, theta: float, chi: float, N: int, m: int, n: int, i: int, k: int) -> float:
    """``Q_{m,n}(i,k;N)`` of ``R(phi, theta, chi)`` as a finite sum of Tratnik polynomials."""
    _check_angles(phi, theta, chi)
    R = euler_product((phi, theta, chi))
    report = genericity_report(R)
    if not report.generic:
        raise NonGenericRotationError("expansion prefactor divides by vanishing entries", report)
    params = tratnik_params_from_angles(theta, chi, N)
    omega = ExpansionPrefactor.compute(phi, theta, chi, N, m, n, i, k).value
    x = tan(phi) / cos(theta) * tan(chi)
    s2 = sin(phi) ** 2
    total = 0.0
    for p in range(N - k + 1):
        total += x**p / factorial(p) * kraw(p, i, s2, N - k) * tratnik_K2(m, n, p, k, params)
    return omega * total


@dataclass(frozen=True)
class AdditionResult:
    """``form`` is ``"polynomial"`` when both forms ran, ``"matrix-element"`` otherwise."""

    form: str
    matrix_element_residual: float
    polynomial_residual: float | None
    reason: str = ""


def addition_formula_residual(A, B, N: int) -> AdditionResult:
    """Check ``U(AB) = U(A) U(B)`` and, for generic A, B, AB, its polynomial form::

        (W^C_x / W^A_x) P^C_a(x) = sum_y W^B_y P^A_y(x) P^B_a(y)

    The polynomial residual is reported in matrix-element units, i.e.
    multiplied by ``|W^A_x|``, so it is comparable across grid points.
    """
    A = np.asarray(A, dtype=float)
    B = np.asarray(B, dtype=float)
    C = A @ B
    ua = representation_matrix(A, N=N).U
    ub = representation_matrix(B, N=N).U
    uc = representation_matrix(C, N=N).U
    elem = float(np.max(np.abs(uc - ua @ ub)))
    try:
        PA = bivariate.build_P_raising(A, N).values
        PB = bivariate.build_P_raising(B, N).values
        PC = bivariate.build_P_raising(C, N).values
    except NonGenericRotationError as exc:
        return AdditionResult("matrix-element", elem, None, str(exc))
    WA = bivariate.amplitude_vector(A, N)
    WB = bivariate.amplitude_vector(B, N)
    WC = bivariate.amplitude_vector(C, N)
    # lhs[a, x] = WC_x / WA_x PC[a, x]; rhs[a, x] = sum_y WB_y PA[y, x] PB[a, y]
    lhs = PC * (WC / WA)[None, :]
    rhs = (PB * WB[None, :]) @ PA
    poly = float(np.max(np.abs((lhs - rhs) * np.abs(WA)[None, :])))
    return AdditionResult("polynomial", elem, poly)
