from itertools import product

import numpy as np
import pytest

from krawpoly.series import coefficient_table, gelfand_aomoto, linear_form_product
from krawpoly.fock_basis import enumerate_basis
from krawpoly.univariate import kraw, pochhammer
from oracles import trinomial


def dict_expand(factors, d):
    """Reference expansion with dict-of-monomials arithmetic."""
    poly = {(0,) * d: 1.0}
    for coeffs, power in factors:
        lin = {(0,) * d: 1.0}
        for k, c in enumerate(coeffs):
            e = [0] * d
            e[k] = 1
            lin[tuple(e)] = lin.get(tuple(e), 0.0) + c
        for _ in range(power):
            new = {}
            for (m1, c1), (m2, c2) in product(poly.items(), lin.items()):
                m = tuple(a + b for a, b in zip(m1, m2))
                new[m] = new.get(m, 0.0) + c1 * c2
            poly = new
    return poly


def test_trinomial_expansion():
    N = 6
    poly = linear_form_product([([1.0, 1.0], N)], 2, N)
    for m, n in enumerate_basis(2, N):
        assert poly[m, n] == trinomial(N, m, n)
    assert poly[0, 0] == 1.0


def test_against_dict_expansion(rng):
    for d in (1, 2, 3):
        N = 5
        factors = [(rng.normal(size=d), 2), (rng.normal(size=d), 1), (np.ones(d), 2)]
        poly = linear_form_product(factors, d, N)
        ref = dict_expand(factors, d)
        for mono in enumerate_basis(d, N):
            assert poly[mono] == pytest.approx(ref.get(mono, 0.0), abs=1e-12)


def test_coefficient_table():
    poly = linear_form_product([([2.0, 3.0], 1)], 2, 1)
    assert list(coefficient_table(poly, [(0, 0), (1, 0), (0, 1)])) == [1.0, 2.0, 3.0]


def test_gelfand_aomoto_d1_is_krawtchouk():
    """For d = 1 the sum is 2F1(-n, -x; -N; omega) = k_n(x; 1/omega; N) / (-N)_n."""
    N, omega = 6, 2.5
    for n in range(N + 1):
        for x in range(N + 1):
            expected = kraw(n, x, 1 / omega, N) / pochhammer(-N, n)
            assert gelfand_aomoto((n,), (x,), [[omega]], N) == pytest.approx(expected, rel=1e-12, abs=1e-12)


def test_gelfand_aomoto_trivial_rows(rng):
    omega = rng.normal(size=(2, 2))
    assert gelfand_aomoto((0, 0), (2, 1), omega, 4) == 1.0
    assert gelfand_aomoto((2, 1), (0, 0), omega, 4) == 1.0
    # a single term beyond the constant: 1 - omega_11 * (-1)(-1)/(-1) = 1 - omega_11
    assert gelfand_aomoto((1, 0), (1, 0), omega, 1) == pytest.approx(1 - omega[0, 0])
