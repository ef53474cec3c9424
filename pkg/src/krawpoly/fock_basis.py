"""Indexing of the energy-N eigenspace of the (d+1)-mode oscillator.

A state ``|n_1, ..., n_d>_N`` is stored as the tuple ``(n_1, ..., n_d)``; the
occupation of the last mode, ``N - sum(n)``, is always derived.  States are
ordered graded-lexicographically: first by ``sum(n)``, then lexicographically.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb
from typing import Iterator, Sequence

from .errors import InputError

__all__ = ["LevelIndex", "LevelBasis", "dimension", "enumerate_basis", "simplex"]


def dimension(d: int, N: int) -> int:
    """Number of states with total energy ``N`` in ``d + 1`` modes."""
    if d < 1 or N < 0:
        raise InputError(f"need d >= 1 and N >= 0, got d={d}, N={N}")
    return comb(N + d, d)


@dataclass(frozen=True)
class LevelIndex:
    d: int
    N: int
    n: tuple[int, ...]

    def __post_init__(self):
        n = tuple(int(v) for v in self.n)
        object.__setattr__(self, "n", n)
        if len(n) != self.d:
            raise InputError(f"expected {self.d} occupations, got {len(n)}")
        if any(v < 0 for v in n) or sum(n) > self.N:
            raise InputError(f"{n} is not a state of level N={self.N}")

    @property
    def last(self) -> int:
        """Occupation of mode d+1."""
        return self.N - sum(self.n)

    @property
    def occupations(self) -> tuple[int, ...]:
        """All d+1 occupation numbers."""
        return self.n + (self.last,)


def _graded_lex(d: int, N: int) -> list[tuple[int, ...]]:
    states = []
    for total in range(N + 1):
        # lexicographic order among tuples with the given sum
        states.extend(sorted(t for t in _compositions(d, total)))
    return states


def _compositions(d: int, total: int) -> Iterator[tuple[int, ...]]:
    if d == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(d - 1, total - first):
            yield (first,) + rest


@dataclass(frozen=True)
class LevelBasis:
    """Ordered list of the states of one level with an inverse rank map."""

    d: int
    N: int
    states: tuple[tuple[int, ...], ...] = field(repr=False)
    _rank: dict = field(repr=False, compare=False)

    def __len__(self) -> int:
        return len(self.states)

    def __iter__(self):
        return iter(self.states)

    @property
    def size(self) -> int:
        return len(self.states)

    def rank(self, n: Sequence[int] | LevelIndex) -> int:
        if isinstance(n, LevelIndex):
            n = n.n
        try:
            return self._rank[tuple(n)]
        except KeyError:
            raise InputError(f"{tuple(n)} is not in the level basis (d={self.d}, N={self.N})") from None

    def unrank(self, r: int) -> tuple[int, ...]:
        if not 0 <= r < len(self.states):
            raise InputError(f"rank {r} outside 0..{len(self.states) - 1}")
        return self.states[r]

    def index(self, r: int) -> LevelIndex:
        return LevelIndex(self.d, self.N, self.unrank(r))

    def __contains__(self, n) -> bool:
        return tuple(n) in self._rank

    def occupations(self, r: int) -> tuple[int, ...]:
        n = self.states[r]
        return n + (self.N - sum(n),)


_cache: dict[tuple[int, int], LevelBasis] = {}


def enumerate_basis(d: int, N: int) -> LevelBasis:
    """Return the (cached, immutable) basis of level ``N`` for ``d`` free indices."""
    dimension(d, N)  # validates
    key = (d, N)
    basis = _cache.get(key)
    if basis is None:
        states = tuple(_graded_lex(d, N))
        basis = LevelBasis(d, N, states, {s: r for r, s in enumerate(states)})
        _cache[key] = basis
    return basis


def simplex(d: int, N: int) -> Iterator[tuple[int, ...]]:
    """Iterate over all d-tuples of non-negative integers with sum <= N."""
    return iter(enumerate_basis(d, N).states)

