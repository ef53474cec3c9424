"""Conversions between rotation entries and the other parametrizations of the
bivariate family: the u-matrix, the four numbers (p1, p2, p3, p4), the weights
(eta, eta~, nu), and the orthogonal matrix V built as ``S1 U S2``.

Every conversion is partial; a vanishing denominator raises
:class:`~krawpoly.errors.SingularParametrizationError` naming it.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InputError, SingularParametrizationError
from .family import EPS_GEN
from .rotations import check_rotation

__all__ = [
    "EtaWeights",
    "PQuadruple",
    "RahmanU",
    "STriple",
    "V_PERMUTATION",
    "V_from_SUS",
    "V_from_fourtuple",
    "conversion_cycle",
    "eta_from_R",
    "eta_from_p",
    "fourtuple_check",
    "fourtuple_matrices",
    "p_from_R",
    "rotation_from_V",
    "u_from_R",
    "u_from_p",
]

# V[a, b] = R[V_PERMUTATION[a], V_PERMUTATION[b]] (0-based): axis 3 first, then 1, 2.
V_PERMUTATION = (2, 0, 1)


def _div(num, den, parameter, label, eps=EPS_GEN):
    if abs(den) < eps:
        raise SingularParametrizationError(parameter, label)
    return num / den


@dataclass(frozen=True)
class RahmanU:
    u11: float
    u12: float
    u21: float
    u22: float

    @property
    def matrix(self) -> np.ndarray:
        """Bordered 3x3 matrix with first row and column equal to 1."""
        return np.array([[1.0, 1.0, 1.0], [1.0, self.u11, self.u12], [1.0, self.u21, self.u22]])

    @property
    def inner(self) -> np.ndarray:
        return np.array([[self.u11, self.u12], [self.u21, self.u22]])

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.u11, self.u12, self.u21, self.u22)


@dataclass(frozen=True)
class PQuadruple:
    p1: float
    p2: float
    p3: float
    p4: float

    def scaled(self, gamma: float) -> "PQuadruple":
        if gamma == 0:
            raise InputError("scale factor must be non-zero")
        return PQuadruple(gamma * self.p1, gamma * self.p2, gamma * self.p3, gamma * self.p4)

    def as_tuple(self):
        return (self.p1, self.p2, self.p3, self.p4)


@dataclass(frozen=True)
class EtaWeights:
    eta0: float
    eta1: float
    eta2: float
    eta0_t: float
    eta1_t: float
    eta2_t: float

    @property
    def nu(self) -> float:
        return 1.0 / self.eta0

    @property
    def P(self) -> np.ndarray:
        return np.diag([self.eta0, self.eta1, self.eta2])

    @property
    def P_t(self) -> np.ndarray:
        return np.diag([self.eta0_t, self.eta1_t, self.eta2_t])


@dataclass(frozen=True)
class STriple:
    S1: np.ndarray
    S2: np.ndarray
    V: np.ndarray
    scale: float


def _R(R):
    R = check_rotation(R, tol=1e-10)
    if R.shape != (3, 3):
        raise InputError("parametrizations are defined for 3x3 rotations")
    return R


def u_from_R(R) -> RahmanU:
    R = _R(R)
    R11, R12, R13 = R[0]
    R21, R22, R23 = R[1]
    R31, R32, R33 = R[2]
    return RahmanU(
        _div(R11 * R33, R13 * R31, "u11", "R13*R31"),
        _div(R12 * R33, R13 * R32, "u12", "R13*R32"),
        _div(R21 * R33, R23 * R31, "u21", "R23*R31"),
        _div(R22 * R33, R23 * R32, "u22", "R23*R32"),
    )


def p_from_R(R) -> PQuadruple:
    R = _R(R)
    R11, R12, R13 = R[0]
    R21, R22, R23 = R[1]
    R31, R32, _ = R[2]
    return PQuadruple(
        _div(R31, R11, "p1", "R11"),
        -_div(R32, R12, "p2", "R12"),
        -_div(R23 * R31, R13 * R21, "p3", "R13*R21"),
        _div(R32 * R23, R13 * R22, "p4", "R13*R22"),
    )


def u_from_p(p: PQuadruple) -> RahmanU:
    p1, p2, p3, p4 = p.as_tuple()
    s = p1 + p2 + p3 + p4
    det = p1 * p4 - p2 * p3
    if abs(s) < EPS_GEN:
        raise SingularParametrizationError("u", "p1+p2+p3+p4")
    return RahmanU(
        _div(det, p1 * s, "u11", "p1"),
        _div(-det, p2 * s, "u12", "p2"),
        _div(-det, p3 * s, "u21", "p3"),
        _div(det, p4 * s, "u22", "p4"),
    )


def eta_from_p(p: PQuadruple) -> EtaWeights:
    p1, p2, p3, p4 = p.as_tuple()
    s = p1 + p2 + p3 + p4
    a, b, c, e = p1 + p2, p1 + p3, p2 + p4, p3 + p4
    eta1 = _div(p1 * p2 * s, a * b * c, "eta1", "(p1+p2)(p1+p3)(p2+p4)")
    eta2 = _div(p3 * p4 * s, b * c * e, "eta2", "(p1+p3)(p2+p4)(p3+p4)")
    eta1_t = _div(p1 * p3 * s, a * b * e, "eta1~", "(p1+p2)(p1+p3)(p3+p4)")
    eta2_t = _div(p2 * p4 * s, a * c * e, "eta2~", "(p1+p2)(p2+p4)(p3+p4)")
    eta0 = 1.0 - eta1 - eta2
    return EtaWeights(eta0, eta1, eta2, eta0, eta1_t, eta2_t)


def eta_from_R(R) -> EtaWeights:
    """Weights read directly from the third column and row of R."""
    R = _R(R)
    return EtaWeights(R[2, 2] ** 2, R[0, 2] ** 2, R[1, 2] ** 2, R[2, 2] ** 2, R[2, 0] ** 2, R[2, 1] ** 2)


def fourtuple_matrices(eta: EtaWeights, u: RahmanU):
    """``(nu, P, P~, U)`` for the orthogonality condition."""
    return eta.nu, eta.P, eta.P_t, u.matrix


def fourtuple_check(nu: float, P, P_t, U) -> float:
    """``max |nu P U P~ U^T - I|``."""
    P, P_t, U = (np.asarray(x, dtype=float) for x in (P, P_t, U))
    if not (P.shape == P_t.shape == U.shape and P.ndim == 2 and P.shape[0] == P.shape[1]):
        raise InputError("P, P~ and U must be square matrices of one size")
    for name, M in (("P", P), ("P~", P_t)):
        if np.any(M - np.diag(np.diag(M))):
            raise InputError(f"{name} must be diagonal")
    return float(np.max(np.abs(nu * P @ U @ P_t @ U.T - np.eye(P.shape[0]))))


def V_from_SUS(R) -> STriple:
    """``V = S1 U S2 / R33`` with ``S1 = diag(R33, R13, R23)``, ``S2 = diag(R33, R31, R32)``.

    V equals R with rows and columns reordered by :data:`V_PERMUTATION`.
    """
    R = _R(R)
    u = u_from_R(R)
    S1 = np.diag([R[2, 2], R[0, 2], R[1, 2]])
    S2 = np.diag([R[2, 2], R[2, 0], R[2, 1]])
    V = S1 @ u.matrix @ S2 / R[2, 2]
    return _fix_det(STriple(S1, S2, V, 1.0 / R[2, 2]))


def _fix_det(t: STriple) -> STriple:
    # convention: when det V = -1, flip the sign of the last diagonal entry of S2
    if np.linalg.det(t.V) > 0:
        return t
    S2 = t.S2.copy()
    S2[-1, -1] = -S2[-1, -1]
    V = t.V.copy()
    V[:, -1] = -V[:, -1]
    return STriple(t.S1, S2, V, t.scale)


def V_from_fourtuple(eta: EtaWeights, u: RahmanU, signs1=None, signs2=None) -> STriple:
    """Orthogonal V from weights and u alone: ``S1 = sqrt(nu P)``, ``S2 = sqrt(P~)``.

    The weights fix S1 and S2 only up to signs; ``signs1`` and ``signs2``
    (three entries of +-1 each, default all +1) select them.  A determinant
    of -1 is then repaired by the last-entry flip of S2.
    """
    s1 = np.ones(3) if signs1 is None else np.asarray(signs1, dtype=float)
    s2 = np.ones(3) if signs2 is None else np.asarray(signs2, dtype=float)
    nuP = eta.nu * np.diag(eta.P)
    Pt = np.diag(eta.P_t)
    if np.any(nuP < 0) or np.any(Pt < 0):
        raise SingularParametrizationError("S", "negative weight under a square root")
    S1 = np.diag(s1 * np.sqrt(nuP))
    S2 = np.diag(s2 * np.sqrt(Pt))
    return _fix_det(STriple(S1, S2, S1 @ u.matrix @ S2, 1.0))


def rotation_from_V(V) -> np.ndarray:
    """Undo the axis reordering of :func:`V_from_SUS`."""
    V = np.asarray(V, dtype=float)
    R = np.empty_like(V)
    for a, pa in enumerate(V_PERMUTATION):
        for b, pb in enumerate(V_PERMUTATION):
            R[pa, pb] = V[a, b]
    return R


def conversion_cycle(R) -> dict:
    """Run R -> p -> (u, eta) -> four-tuple -> V -> R and report the defects.

    The weights and u determine R only up to the signs of the third row and
    column, so the signs of ``S1`` and ``S2`` are taken from R itself.
    """
    R = _R(R)
    p = p_from_R(R)
    u = u_from_p(p)
    eta = eta_from_p(p)
    u_direct = u_from_R(R)
    eta_direct = eta_from_R(R)
    nu, P, P_t, U = fourtuple_matrices(eta, u)
    signs1 = np.sign([R[2, 2], R[0, 2], R[1, 2]]) * np.sign(R[2, 2])
    signs2 = np.sign([R[2, 2], R[2, 0], R[2, 1]])
    V = V_from_fourtuple(eta, u, signs1, signs2).V
    R_back = rotation_from_V(V)
    return {
        "u_vs_direct": float(np.max(np.abs(np.array(u.as_tuple()) - np.array(u_direct.as_tuple())))),
        "eta_vs_direct": float(
            max(abs(a - b) for a, b in zip(eta.__dict__.values(), eta_direct.__dict__.values()))
        ),
        "fourtuple": fourtuple_check(nu, P, P_t, U),
        "V_orthogonality": float(np.max(np.abs(V @ V.T - np.eye(3)))),
        "rotation": float(np.max(np.abs(R_back - R))),
    }
