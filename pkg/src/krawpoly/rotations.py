"""Proper rotation matrices and their antisymmetric generators.

Axes are numbered from 1 as in the usual (x, y, z) = (1, 2, 3) labelling.
Rotation matrices are plain ``numpy`` arrays; :func:`check_rotation` validates
them.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np
import scipy.linalg

from .errors import InputError, NonPrincipalRotationError, NotARotationError

EPS_ORTHO = 1e-12

__all__ = [
    "EPS_ORTHO",
    "EulerAngles",
    "Generator",
    "check_rotation",
    "euler_product",
    "exp_generator",
    "plane_generator",
    "plane_rotation",
    "random_rotation",
    "real_log",
]


@dataclass(frozen=True)
class Generator:
    """Real antisymmetric matrix, stored as its strict upper triangle.

    ``upper`` lists ``B[a, b]`` for ``a < b`` in row-major order.
    """

    size: int
    upper: tuple[float, ...]

    def __post_init__(self):
        expected = self.size * (self.size - 1) // 2
        if len(self.upper) != expected:
            raise InputError(f"a {self.size}x{self.size} generator has {expected} free entries, got {len(self.upper)}")
        object.__setattr__(self, "upper", tuple(float(v) for v in self.upper))

    @classmethod
    def from_matrix(cls, B, tol: float = 1e-12) -> "Generator":
        B = np.asarray(B, dtype=float)
        if B.ndim != 2 or B.shape[0] != B.shape[1]:
            raise InputError("generator must be a square matrix")
        scale = max(1.0, float(np.max(np.abs(B))) if B.size else 1.0)
        if np.max(np.abs(B + B.T), initial=0.0) > tol * scale:
            raise InputError("generator is not antisymmetric")
        iu = np.triu_indices(B.shape[0], k=1)
        return cls(B.shape[0], tuple(B[iu]))

    @classmethod
    def zero(cls, size: int) -> "Generator":
        return cls(size, (0.0,) * (size * (size - 1) // 2))

    @property
    def matrix(self) -> np.ndarray:
        B = np.zeros((self.size, self.size))
        iu = np.triu_indices(self.size, k=1)
        B[iu] = self.upper
        return B - B.T

    def __add__(self, other: "Generator") -> "Generator":
        if self.size != other.size:
            raise InputError("generator sizes differ")
        return Generator(self.size, tuple(a + b for a, b in zip(self.upper, other.upper)))

    def __mul__(self, scalar: float) -> "Generator":
        return Generator(self.size, tuple(scalar * a for a in self.upper))

    __rmul__ = __mul__


class EulerAngles(NamedTuple):
    phi: float
    theta: float
    chi: float


def check_rotation(R, tol: float = EPS_ORTHO) -> np.ndarray:
    """Return ``R`` as a float array, raising if it is not a proper rotation."""
    R = np.asarray(R, dtype=float)
    if R.ndim != 2 or R.shape[0] != R.shape[1]:
        raise NotARotationError(f"rotation must be square, got shape {R.shape}")
    defect = np.max(np.abs(R.T @ R - np.eye(R.shape[0])))
    if defect > tol:
        raise NotARotationError(f"R^T R deviates from identity by {defect:.3e}")
    det = np.linalg.det(R)
    if abs(det - 1.0) > tol:
        raise NotARotationError(f"det R = {det!r}, expected 1")
    return R


def exp_generator(B: Generator | np.ndarray) -> np.ndarray:
    """Rotation ``R = exp(B)``."""
    if not isinstance(B, Generator):
        B = Generator.from_matrix(B)
    return scipy.linalg.expm(B.matrix)


def _check_axes(size: int, axes: Sequence[int]) -> tuple[int, int]:
    a, b = axes
    if not (1 <= a < b <= size):
        raise InputError(f"invalid axis pair {axes!r} for size {size}; need 1 <= a < b <= {size}")
    return a, b


def plane_generator(size: int, axes: Sequence[int], angle: float) -> Generator:
    """Generator whose exponential is :func:`plane_rotation` for the same arguments.

    The (a, b) plane carries ``B[a, b] = angle`` for every pair except (1, 3),
    where the sign is reversed so that both the yz and the xz rotations
    follow the conventions of the oscillator literature (see ``plane_rotation``).
    """
    a, b = _check_axes(size, axes)
    B = np.zeros((size, size))
    s = -1.0 if (a, b) == (1, 3) else 1.0
    B[a - 1, b - 1] = s * angle
    B[b - 1, a - 1] = -s * angle
    return Generator.from_matrix(B)


def plane_rotation(size: int, axes: Sequence[int], angle: float) -> np.ndarray:
    """Rotation by ``angle`` in the coordinate plane ``axes = (a, b)``.

    For ``size == 3``::

        (2, 3): [[1, 0, 0], [0, c, s], [0, -s, c]]
        (1, 3): [[c, 0, -s], [0, 1, 0], [s, 0, c]]

    All other planes use the (2, 3) pattern, ``R[a, b] = +sin``.
    """
    a, b = _check_axes(size, axes)
    c, s = np.cos(angle), np.sin(angle)
    if (a, b) == (1, 3):
        s = -s
    R = np.eye(size)
    R[a - 1, a - 1] = c
    R[b - 1, b - 1] = c
    R[a - 1, b - 1] = s
    R[b - 1, a - 1] = -s
    return R


def euler_product(angles: EulerAngles | Sequence[float]) -> np.ndarray:
    """``R_xz(phi) @ R_yz(theta) @ R_xz(chi)``."""
    phi, theta, chi = angles
    return plane_rotation(3, (1, 3), phi) @ plane_rotation(3, (2, 3), theta) @ plane_rotation(3, (1, 3), chi)


def euler_factors(angles: EulerAngles | Sequence[float]) -> list[Generator]:
    """Generators of the three factors of :func:`euler_product`, left to right."""
    phi, theta, chi = angles
    return [plane_generator(3, (1, 3), phi), plane_generator(3, (2, 3), theta), plane_generator(3, (1, 3), chi)]


def real_log(R, tol: float = 1e-9) -> Generator:
    """Principal real logarithm of a rotation.

    Uses the real Schur form, which for an orthogonal matrix is block diagonal
    with 2x2 rotation blocks and 1x1 entries equal to +1 or -1.  Raises
    :class:`NonPrincipalRotationError` when some rotation angle equals pi.
    """
    R = check_rotation(R, tol=1e-10)
    n = R.shape[0]
    T, Z = scipy.linalg.schur(R, output="real")
    L = np.zeros_like(T)
    j = 0
    while j < n:
        if j + 1 < n and abs(T[j + 1, j]) > tol:
            a, b, c, d = T[j, j], T[j, j + 1], T[j + 1, j], T[j + 1, j + 1]
            angle = np.arctan2(0.5 * (c - b), 0.5 * (a + d))
            if abs(abs(angle) - np.pi) < tol:
                raise NonPrincipalRotationError("rotation angle pi in an invariant plane")
            L[j, j + 1] = -angle
            L[j + 1, j] = angle
            j += 2
        else:
            if T[j, j] < 0:
                raise NonPrincipalRotationError("rotation has eigenvalue -1")
            j += 1
    B = Z @ L @ Z.T
    return Generator.from_matrix(0.5 * (B - B.T))


def random_rotation(size: int, rng: np.random.Generator, min_abs: float = 0.0, max_tries: int = 10_000) -> np.ndarray:
    """Haar-random rotation; with ``min_abs > 0`` every entry satisfies ``|R_ij| >= min_abs``."""
    for _ in range(max_tries):
        Q, Rq = np.linalg.qr(rng.standard_normal((size, size)))
        Q = Q * np.sign(np.diag(Rq))
        if np.linalg.det(Q) < 0:
            Q[:, 0] = -Q[:, 0]
        if np.min(np.abs(Q)) >= min_abs:
            return Q
    raise InputError(f"could not draw a rotation with all |entries| >= {min_abs}")
