"""Tables of polynomial values over one level, and genericity bookkeeping."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from math import factorial, prod

import numpy as np

from .errors import InputError, NonGenericRotationError
from .fock_basis import LevelBasis, enumerate_basis

__all__ = [
    "EPS_GEN",
    "GenericityReport",
    "KrawtchoukFamily",
    "genericity_report",
    "multinomial",
    "require_generic",
]

EPS_GEN = 1e-10


def multinomial(N: int, idx) -> int:
    """``N! / (idx_1! ... idx_d! (N - sum idx)!)``."""
    rest = N - sum(idx)
    return factorial(N) // (prod(factorial(v) for v in idx) * factorial(rest))


def _label(a: int, b: int) -> str:
    return f"R{a + 1}{b + 1}" if max(a, b) < 9 else f"R{a + 1},{b + 1}"


@dataclass(frozen=True)
class GenericityReport:
    """Which rotation entries are numerically zero (``|R_ab| < eps``)."""

    flags: dict
    eps: float = EPS_GEN

    def vanishing(self, names=None) -> list[str]:
        names = self.flags if names is None else names
        return [n for n in names if self.flags[n]]

    @property
    def generic(self) -> bool:
        return not any(self.flags.values())


def genericity_report(R, eps: float = EPS_GEN) -> GenericityReport:
    R = np.asarray(R, dtype=float)
    n = R.shape[0]
    return GenericityReport({_label(a, b): bool(abs(R[a, b]) < eps) for a in range(n) for b in range(n)}, eps)


def require_generic(R, names, route: str, eps: float = EPS_GEN) -> None:
    report = genericity_report(R, eps)
    bad = report.vanishing(names)
    if bad:
        raise NonGenericRotationError(f"{route} route divides by {', '.join(bad)}, which vanish", report)


@dataclass(frozen=True)
class KrawtchoukFamily:
    """Values of P or Q for every degree and every grid point of one level.

    ``values[rank(degree), rank(variable)]`` in :class:`LevelBasis` order.
    ``kind`` is ``"P"`` (orthonormal) or ``"Q"`` (normalised to 1 at the
    origin); ``route`` records how the table was computed.
    """

    R: np.ndarray = field(repr=False)
    N: int
    kind: str
    route: str
    values: np.ndarray = field(repr=False)

    @property
    def d(self) -> int:
        return self.R.shape[0] - 1

    @property
    def basis(self) -> LevelBasis:
        return enumerate_basis(self.d, self.N)

    def __call__(self, *args) -> float:
        """``f(degree, variable)`` with tuples, or ``f(m, n, i, k)`` when d = 2."""
        if len(args) == 2:
            degree, variable = args
        elif len(args) == 2 * self.d:
            degree, variable = args[: self.d], args[self.d :]
        else:
            raise TypeError(f"expected (degree, variable) or {2 * self.d} integers")
        b = self.basis
        return float(self.values[b.rank(degree), b.rank(variable)])

    def contains(self, degree, variable) -> bool:
        b = self.basis
        return tuple(degree) in b and tuple(variable) in b

    def with_values(self, values, route: str | None = None) -> "KrawtchoukFamily":
        return replace(self, values=np.asarray(values, dtype=float), route=route or self.route)


MultiFamily = KrawtchoukFamily


def scaled_deviation(a, b) -> float:
    """``max |a - b| / max(1, |a|, |b|)`` elementwise.

    Absolute below magnitude 1, relative above it.  Q values grow like
    inverse powers of small rotation entries, so identities between Q tables
    are compared on this scale.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    scale = np.maximum(1.0, np.maximum(np.abs(a), np.abs(b)))
    return float(np.max(np.abs(a - b) / scale))


# default size limits for the table routes; the oracle has its own
TABLE_MAX_N_BIVARIATE = 30
TABLE_MAX_D = 4
TABLE_MAX_N = 12


def check_table_size(d: int, N: int) -> None:
    """Reject levels beyond the default limits of the table routes."""
    if d == 2:
        if N > TABLE_MAX_N_BIVARIATE:
            raise InputError(f"bivariate tables are limited to N <= {TABLE_MAX_N_BIVARIATE}, got {N}")
        return
    if d > TABLE_MAX_D or N > TABLE_MAX_N:
        raise InputError(f"tables are limited to d <= {TABLE_MAX_D} and N <= {TABLE_MAX_N}, got d={d}, N={N}")
