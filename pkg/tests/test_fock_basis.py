import pytest
from hypothesis import given, strategies as st

from krawpoly.errors import InputError
from krawpoly.fock_basis import LevelIndex, dimension, enumerate_basis, simplex
from oracles import brute_force_states


def test_dimension_examples():
    assert dimension(2, 3) == 10
    assert dimension(2, 0) == 1
    assert dimension(3, 2) == 10
    assert dimension(3, 2) == len(brute_force_states(3, 2))


def test_dimension_d2_formula():
    for N in range(15):
        assert dimension(2, N) == (N + 1) * (N + 2) // 2


@pytest.mark.parametrize("d, N", [(0, 1), (1, -1), (-2, 3)])
def test_dimension_rejects(d, N):
    with pytest.raises(InputError):
        dimension(d, N)


def test_small_orders():
    assert list(enumerate_basis(1, 2)) == [(0,), (1,), (2,)]
    assert list(enumerate_basis(2, 1)) == [(0, 0), (0, 1), (1, 0)]


def test_matches_brute_force_order():
    for d in range(1, 5):
        for N in range(0, 13):
            basis = enumerate_basis(d, N)
            assert list(basis) == brute_force_states(d, N)
            assert len(basis) == dimension(d, N)


def test_rank_unrank_roundtrip():
    basis = enumerate_basis(2, 5)
    for r in range(basis.size):
        assert basis.rank(basis.unrank(r)) == r
    for s in basis:
        assert basis.unrank(basis.rank(s)) == s


@given(st.integers(1, 4), st.integers(0, 8), st.data())
def test_rank_bijection_property(d, N, data):
    basis = enumerate_basis(d, N)
    r = data.draw(st.integers(0, basis.size - 1))
    assert basis.rank(basis.unrank(r)) == r


def test_rank_errors_and_contains():
    basis = enumerate_basis(2, 2)
    assert (1, 1) in basis
    assert (2, 1) not in basis
    with pytest.raises(InputError):
        basis.rank((2, 1))
    with pytest.raises(InputError):
        basis.unrank(basis.size)


def test_occupations_derive_last_mode():
    basis = enumerate_basis(2, 4)
    for r, n in enumerate(basis):
        occ = basis.occupations(r)
        assert occ[:2] == n and sum(occ) == 4


def test_level_index():
    idx = LevelIndex(2, 3, (1, 1))
    assert idx.last == 1
    assert idx.occupations == (1, 1, 1)
    assert enumerate_basis(2, 3).rank(idx) == enumerate_basis(2, 3).rank((1, 1))
    with pytest.raises(InputError):
        LevelIndex(2, 1, (1, 1))
    with pytest.raises(InputError):
        LevelIndex(2, 3, (-1, 0))


def test_basis_cached_and_simplex():
    assert enumerate_basis(3, 4) is enumerate_basis(3, 4)
    assert list(simplex(2, 2)) == brute_force_states(2, 2)
