"""Multivariate Krawtchouk polynomials for a rotation of size d+1.

Generalises the bivariate engine: the level-N representation matrix factors
as ``<i| U |n> = W_i P_n(i)`` with multi-indices of length d.  Raising
relations, one per creation operator ``a_j^+``, read::

    sqrt(N (n_j + 1)) P_{n + e_j}(i; N)
        = sum_{l=1}^{d+1} (R_{l,j} / R_{l,d+1}) i_l P_n(i - e_l; N - 1)

where ``i_{d+1} = N - |i|`` and ``i - e_{d+1}`` is the same multi-index at
level N - 1.  For d = 2 this is exactly the bivariate pair of relations.
"""

from __future__ import annotations

from math import lgamma, sqrt

import numpy as np

from . import bivariate
from .errors import InputError
from .family import KrawtchoukFamily, MultiFamily, check_table_size, multinomial, require_generic
from .fock_basis import enumerate_basis
from .oracle import RepresentationMatrix, representation_matrix
from .rotations import check_rotation
from .series import linear_form_product

__all__ = [
    "MultiFamily",
    "P_to_Q_d",
    "Q_to_P_d",
    "Q_via_generating_d",
    "Q_via_hypergeometric_d",
    "amplitude_d",
    "amplitude_d_vector",
    "build_P_d",
    "build_P_oracle_d",
    "build_P_raising_d",
    "duality_residual_d",
    "factorization_residual_d",
    "orthonormality_residual_d",
    "u_matrix_d",
]


def _rotation(R) -> np.ndarray:
    R = check_rotation(R, tol=1e-10)
    if R.shape[0] < 2:
        raise InputError("need a rotation of size >= 2")
    return R


def _last_column(R) -> list[str]:
    n = R.shape[0]
    return [f"R{a},{n}" if n > 9 else f"R{a}{n}" for a in range(1, n + 1)]


def _last_row(R) -> list[str]:
    n = R.shape[0]
    return [f"R{n},{b}" if n > 9 else f"R{n}{b}" for b in range(1, n + 1)]


def amplitude_d(R, N: int, i) -> float:
    """``sqrt(multinomial) prod_j R_{j,d+1}^{i_j} R_{d+1,d+1}^{N-|i|}``."""
    R = np.asarray(R, dtype=float)
    d = R.shape[0] - 1
    i = tuple(i)
    if len(i) != d or any(v < 0 for v in i) or sum(i) > N:
        raise InputError(f"{i} is not a point of level N={N} with d={d}")
    log_pref = 0.5 * (lgamma(N + 1) - sum(lgamma(v + 1) for v in i) - lgamma(N - sum(i) + 1))
    return bivariate._signed_power_product(R[:, d], i + (N - sum(i),), log_pref)


def amplitude_d_vector(R, N: int) -> np.ndarray:
    R = np.asarray(R, dtype=float)
    return np.array([amplitude_d(R, N, i) for i in enumerate_basis(R.shape[0] - 1, N)])


def _raise_level_d(R, prev: np.ndarray, L: int) -> np.ndarray:
    d = R.shape[0] - 1
    basis = enumerate_basis(d, L)
    below = enumerate_basis(d, L - 1)
    ratios = R[:, :d] / R[:, d][:, None]  # ratios[l, j] = R_{l,j} / R_{l,d+1}
    new = np.empty((len(basis), len(basis)))
    for r, deg in enumerate(basis):
        if sum(deg) == 0:
            new[r, :] = 1.0
            continue
        j = next(a for a, v in enumerate(deg) if v > 0)
        src_deg = deg[:j] + (deg[j] - 1,) + deg[j + 1 :]
        src = prev[below.rank(src_deg)]
        scale = sqrt(L * deg[j])
        for c, var in enumerate(basis):
            acc = 0.0
            occ = var + (L - sum(var),)
            for l in range(d + 1):
                if occ[l] == 0:
                    continue
                shifted = var if l == d else var[:l] + (var[l] - 1,) + var[l + 1 :]
                acc += ratios[l, j] * occ[l] * src[below.rank(shifted)]
            new[r, c] = acc / scale
    return new


def build_P_raising_d(R, N: int) -> MultiFamily:
    """P table of level N via the d-variate raising relations."""
    R = _rotation(R)
    check_table_size(R.shape[0] - 1, N)
    require_generic(R, _last_column(R), "raising")
    vals = np.ones((1, 1))
    for L in range(1, N + 1):
        vals = _raise_level_d(R, vals, L)
    return KrawtchoukFamily(R, N, "P", "raising", vals)


def build_P_oracle_d(R=None, N: int = 0, rep: RepresentationMatrix | None = None) -> MultiFamily:
    """P as oracle matrix element over amplitude (NaN where the amplitude vanishes)."""
    if rep is None:
        rep = representation_matrix(_rotation(R), N=N)
    R = rep.R
    W = amplitude_d_vector(R, rep.N)
    vals = np.full_like(rep.U, np.nan)
    nz = np.abs(W) > 0.0
    vals[:, nz] = rep.U[nz, :].T / W[nz]
    if np.any(np.abs(rep.U[~nz, :]) > 1e-12):
        from .errors import InconsistencyError

        raise InconsistencyError("amplitude vanishes where matrix elements do not")
    return KrawtchoukFamily(R, rep.N, "P", "oracle", vals)


def build_P_d(R, N: int, route: str = "auto", delegate: bool = True) -> MultiFamily:
    """P table for any d.

    ``route`` is ``"raising"``, ``"oracle"`` or ``"auto"`` (raising when the
    last column of R is generic, else oracle).  With ``delegate`` the d = 2
    case is computed by :mod:`krawpoly.bivariate`.
    """
    R = _rotation(R)
    if route == "auto":
        route = "raising" if np.all(np.abs(R[:, -1]) >= 1e-10) else "oracle"
    if route == "raising":
        if delegate and R.shape[0] == 3:
            return bivariate.build_P_raising(R, N)
        return build_P_raising_d(R, N)
    if route == "oracle":
        return build_P_oracle_d(R, N)
    raise InputError(f"unknown route {route!r}")


def _pq_scale_d(R, N) -> np.ndarray:
    d = R.shape[0] - 1
    ratios = R[d, :d] / R[d, d]
    return np.array(
        [sqrt(multinomial(N, n)) * np.prod(ratios ** np.array(n)) for n in enumerate_basis(d, N)]
    )


def P_to_Q_d(family: MultiFamily) -> MultiFamily:
    """Rescale degree rows by ``sqrt(multinomial) prod_k (R_{d+1,k}/R_{d+1,d+1})^{n_k}``."""
    if family.kind != "P":
        raise InputError("expects a P family")
    require_generic(family.R, _last_row(family.R), "P_to_Q")
    return KrawtchoukFamily(family.R, family.N, "Q", family.route, family.values / _pq_scale_d(family.R, family.N)[:, None])


def Q_to_P_d(family: MultiFamily) -> MultiFamily:
    if family.kind != "Q":
        raise InputError("expects a Q family")
    return KrawtchoukFamily(family.R, family.N, "P", family.route, family.values * _pq_scale_d(family.R, family.N)[:, None])


def u_matrix_d(R) -> np.ndarray:
    """``u[j, k] = R_{j,k} R_{d+1,d+1} / (R_{j,d+1} R_{d+1,k})`` for j, k in 1..d."""
    R = np.asarray(R, dtype=float)
    require_generic(R, sorted(set(_last_column(R)) | set(_last_row(R))), "u-parameter")
    d = R.shape[0] - 1
    return R[:d, :d] * R[d, d] / np.outer(R[:d, d], R[d, :d])


def Q_via_generating_d(R, N: int) -> MultiFamily:
    """Q from the multinomial generating function
    ``(1 + sum z)^(N-|i|) prod_j (1 + sum_k u_jk z_k)^(i_j)``.
    """
    R = _rotation(R)
    check_table_size(R.shape[0] - 1, N)
    d = R.shape[0] - 1
    u = u_matrix_d(R)
    basis = enumerate_basis(d, N)
    ones = np.ones(d)
    vals = np.empty((len(basis), len(basis)))
    for c, var in enumerate(basis):
        factors = [(u[j], var[j]) for j in range(d)] + [(ones, N - sum(var))]
        poly = linear_form_product(factors, d, N)
        for r, deg in enumerate(basis):
            vals[r, c] = poly[deg] / multinomial(N, deg)
    return KrawtchoukFamily(R, N, "Q", "generating", vals)


def Q_via_hypergeometric_d(R, N: int) -> MultiFamily:
    """Q from the Gel'fand-Aomoto multi-sum in ``omega = 1 - u``."""
    from .series import gelfand_aomoto

    R = _rotation(R)
    check_table_size(R.shape[0] - 1, N)
    d = R.shape[0] - 1
    omega = 1.0 - u_matrix_d(R)
    basis = enumerate_basis(d, N)
    vals = np.array([[gelfand_aomoto(deg, var, omega, N) for var in basis] for deg in basis])
    return KrawtchoukFamily(R, N, "Q", "hypergeometric", vals)


def orthonormality_residual_d(family: MultiFamily) -> float:
    if family.kind != "P":
        raise InputError("orthonormality is stated for P families")
    w = amplitude_d_vector(family.R, family.N) ** 2
    G = (family.values * w) @ family.values.T
    return float(np.max(np.abs(G - np.eye(len(G)))))


def factorization_residual_d(family: MultiFamily, rep: RepresentationMatrix | None = None) -> float:
    if family.kind != "P":
        raise InputError("factorization is stated for P families")
    if rep is None:
        rep = representation_matrix(family.R, N=family.N)
    W = amplitude_d_vector(family.R, family.N)
    return float(np.max(np.abs(rep.U - W[:, None] * family.values.T)))


def duality_residual_d(R, N: int) -> float:
    """``max |Q^(R)_i(n) - Q^(R^T)_n(i)|`` using the generating-function route."""
    R = _rotation(R)
    q = Q_via_generating_d(R, N).values
    qt = Q_via_generating_d(R.T, N).values
    return float(np.max(np.abs(q - qt.T)))
