"""Dense matrix of U(R) = exp(sum_jk B_jk a_j^+ a_k) on one oscillator level.

This is the brute-force reference every polynomial route is checked against.
Rows and columns follow :func:`krawpoly.fock_basis.enumerate_basis` order, and
``U[rank(bra), rank(ket)] = <bra| U |ket>``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import sqrt
from typing import Sequence

import numpy as np
import scipy.linalg

from .errors import InputError
from .fock_basis import LevelBasis, LevelIndex, dimension, enumerate_basis
from .rotations import Generator, check_rotation, exp_generator, real_log

__all__ = [
    "RepresentationMatrix",
    "generator_on_level",
    "matrix_element",
    "n1_relabeling",
    "representation_matrix",
]

# dense level matrices beyond this size are refused
MAX_DIMENSION = 2000


@dataclass(frozen=True)
class RepresentationMatrix:
    basis: LevelBasis
    U: np.ndarray = field(repr=False)
    R: np.ndarray = field(repr=False)

    @property
    def d(self) -> int:
        return self.basis.d

    @property
    def N(self) -> int:
        return self.basis.N

    def orthogonality_defect(self) -> float:
        return float(np.max(np.abs(self.U.T @ self.U - np.eye(len(self.basis)))))

    def element(self, bra, ket) -> float:
        return matrix_element(self, bra, ket)


def generator_on_level(B: Generator | np.ndarray, d: int, N: int) -> np.ndarray:
    """Matrix of ``sum_{j,k} B_jk a_j^+ a_k`` restricted to level ``N``.

    ``a_j^+ a_k`` moves one quantum from mode k to mode j with amplitude
    ``sqrt(n_k (n_j + 1))``.  The diagonal ``j == k`` terms vanish because B
    is antisymmetric.
    """
    if not isinstance(B, Generator):
        B = Generator.from_matrix(B)
    if B.size != d + 1:
        raise InputError(f"generator size {B.size} does not match d+1 = {d + 1}")
    Bm = B.matrix
    basis = enumerate_basis(d, N)
    G = np.zeros((len(basis), len(basis)))
    for col in range(len(basis)):
        occ = basis.occupations(col)
        for k in range(d + 1):
            if occ[k] == 0:
                continue
            for j in range(d + 1):
                if j == k or Bm[j, k] == 0.0:
                    continue
                new = list(occ)
                new[k] -= 1
                new[j] += 1
                row = basis.rank(new[:d])
                G[row, col] += Bm[j, k] * sqrt(occ[k] * (occ[j] + 1))
    return G


def _rep_from_generator(B: Generator, d: int, N: int) -> np.ndarray:
    size = dimension(d, N)
    if size > MAX_DIMENSION:
        raise InputError(f"level (d={d}, N={N}) has dimension {size} > {MAX_DIMENSION}; the dense oracle is not meant for it")
    return scipy.linalg.expm(generator_on_level(B, d, N))


def representation_matrix(
    R=None,
    d: int | None = None,
    N: int = 0,
    *,
    generator: Generator | np.ndarray | None = None,
    factors: Sequence[Generator | np.ndarray] | None = None,
) -> RepresentationMatrix:
    """Representation matrix of a rotation on level ``N``.

    Exactly one of ``R``, ``generator`` or ``factors`` must be given.
    ``factors`` is a sequence of generators ``B_1, ..., B_r`` standing for the
    product ``exp(B_1) ... exp(B_r)``; the level matrices of the factors are
    multiplied, so no logarithm of the product is ever needed.  When only
    ``R`` is given its principal logarithm is taken, which fails for
    rotations by pi.
    """
    given = sum(x is not None for x in (R, generator, factors))
    if given != 1:
        raise InputError("give exactly one of R, generator, factors")
    if factors is not None:
        gens = [g if isinstance(g, Generator) else Generator.from_matrix(g) for g in factors]
        if not gens:
            raise InputError("empty factor list")
        size = gens[0].size
        d = size - 1 if d is None else d
        U = np.eye(len(enumerate_basis(d, N)))
        Rm = np.eye(size)
        for g in gens:
            U = U @ _rep_from_generator(g, d, N)
            Rm = Rm @ exp_generator(g)
        return RepresentationMatrix(enumerate_basis(d, N), U, Rm)
    if generator is not None:
        B = generator if isinstance(generator, Generator) else Generator.from_matrix(generator)
        Rm = exp_generator(B)
    else:
        Rm = check_rotation(R, tol=1e-10)
        B = real_log(Rm)
    d = B.size - 1 if d is None else d
    return RepresentationMatrix(enumerate_basis(d, N), _rep_from_generator(B, d, N), Rm)


def matrix_element(rep: RepresentationMatrix, bra, ket) -> float:
    """``<bra| U |ket>`` for two states of the representation's level."""
    for label, s in (("bra", bra), ("ket", ket)):
        if isinstance(s, LevelIndex) and (s.d, s.N) != (rep.d, rep.N):
            raise InputError(f"{label} belongs to level (d={s.d}, N={s.N}), not (d={rep.d}, N={rep.N})")
    return float(rep.U[rep.basis.rank(bra), rep.basis.rank(ket)])


def n1_relabeling(d: int) -> list[int]:
    """Rotation axis (0-based) carried by each N=1 basis state, in rank order.

    The state with a single quantum in mode j corresponds to axis j; the
    all-zero tuple is the quantum in mode d+1.
    """
    basis = enumerate_basis(d, 1)
    axes = []
    for n in basis:
        axes.append(n.index(1) if 1 in n else d)
    return axes
