from math import comb, cos, factorial, pi, sqrt

import numpy as np
import pytest
from hypothesis import given, strategies as st

from krawpoly.errors import DomainError, InputError
from krawpoly.oracle import representation_matrix
from krawpoly.rotations import plane_generator
from krawpoly.univariate import (
    UniKrawtchoukParams,
    hermite,
    kraw,
    monic_kraw,
    plane_level_matrix,
    plane_matrix_element_xz,
    plane_matrix_element_yz,
    pochhammer,
)
from krawpoly.fock_basis import enumerate_basis
from oracles import kraw_exact


def test_pochhammer():
    assert pochhammer(3, 0) == 1
    assert pochhammer(3, 3) == 60
    assert pochhammer(-4, 2) == 12
    assert pochhammer(-2, 3) == 0
    assert pochhammer(0.5, 2) == pytest.approx(0.75)
    with pytest.raises(DomainError):
        pochhammer(1, -1)


def test_kraw_examples():
    for x in [0, 1.5, 3, 7]:
        assert kraw(0, x, 0.3, 5) == 1.0
    assert kraw(1, 2, 0.5, 4) == 0.0
    for x in range(5):
        assert kraw(1, x, 0.3, 4) == pytest.approx(-4 + x / 0.3)


def test_kraw_against_exact_series():
    for J in range(0, 9):
        for n in range(J + 1):
            for x in range(J + 1):
                for p in (0.3, 0.5, 0.85):
                    exact = float(kraw_exact(n, x, p, J))
                    assert kraw(n, x, p, J) == pytest.approx(exact, rel=1e-12, abs=1e-9)


def test_kraw_domain():
    with pytest.raises(DomainError):
        kraw(5, 1, 0.3, 4)
    with pytest.raises(DomainError):
        kraw(-1, 1, 0.3, 4)
    # the continuation in J is a polynomial identity: equals the series for J >= n
    assert kraw(2, 1.0, 0.4, 5, strict=False) == kraw(2, 1.0, 0.4, 5)
    assert np.isfinite(kraw(5, 1, 0.3, 4, strict=False))


def test_kraw_orthogonality():
    p, J = 0.3, 6
    w = [comb(J, x) * p**x * (1 - p) ** (J - x) for x in range(J + 1)]
    for m in range(J + 1):
        for n in range(J + 1):
            s = sum(w[x] * kraw(m, x, p, J) * kraw(n, x, p, J) for x in range(J + 1))
            expected = (-1) ** n * factorial(n) * pochhammer(-J, n) * ((1 - p) / p) ** n if m == n else 0.0
            assert s == pytest.approx(expected, rel=1e-10, abs=1e-8)


def monic_terms(n, x, p, J):
    q = lambda k: monic_kraw(k, x, p, J)  # noqa: E731
    return [x * q(n), -q(n + 1), -(p * (J - n) + n * (1 - p)) * q(n), -n * p * (1 - p) * (J + 1 - n) * q(n - 1)]


def monic_residual(n, x, p, J):
    return sum(monic_terms(n, x, p, J))


def test_monic_recurrence():
    assert monic_kraw(0, 2.0, 0.3, 5) == 1.0
    assert abs(monic_residual(3, 5, 0.3, 8)) <= 1e-10
    for J in (5, 12, 20):
        for n in range(1, J):
            for x in range(J + 1):
                # values reach 1e10 at J = 20, so the residual is measured
                # against the largest term of the relation
                terms = monic_terms(n, x, 0.37, J)
                assert abs(sum(terms)) <= 1e-9 * max(1.0, max(map(abs, terms)))


def test_monic_leading_coefficient():
    p, J, n = 0.4, 6, 4
    values = [monic_kraw(n, x, p, J) for x in range(n + 1)]
    diff = np.diff(values, n)[0]
    assert diff / factorial(n) == pytest.approx(1.0, abs=1e-10)


def test_params_validation():
    UniKrawtchoukParams(0.5, 3)
    with pytest.raises(InputError):
        UniKrawtchoukParams(1.0, 3)
    with pytest.raises(InputError):
        UniKrawtchoukParams(0.5, -1)


def test_hermite_basics():
    assert hermite(0, 1.7) == 1.0
    assert hermite(1, 1.7) == pytest.approx(3.4)
    xs = np.linspace(-2, 2, 9)
    for n in range(8):
        ref = np.polynomial.hermite.hermval(xs, [0] * n + [1])
        assert np.allclose(hermite(n, xs), ref, rtol=1e-13, atol=1e-10)


def test_hermite_norm():
    x, w = np.polynomial.hermite.hermgauss(8)
    assert abs(np.sum(w * hermite(3, x) ** 2) - 2**3 * 6 * sqrt(pi)) <= 1e-10


def oracle_plane(axes, angle, N):
    return representation_matrix(generator=plane_generator(3, axes, angle), N=N)


def test_plane_identity_angle():
    for N in range(4):
        for bra in enumerate_basis(2, N):
            for ket in enumerate_basis(2, N):
                delta = float(bra == ket)
                assert plane_matrix_element_yz(0.0, N, bra, ket) == delta
                assert plane_matrix_element_xz(0.0, N, bra, ket) == delta


def test_plane_n1_value():
    assert plane_matrix_element_yz(0.4, 1, (0, 1), (0, 1)) == pytest.approx(cos(0.4), abs=1e-15)


@pytest.mark.parametrize("axes, element", [((2, 3), plane_matrix_element_yz), ((1, 3), plane_matrix_element_xz)])
def test_plane_against_oracle(rng, axes, element):
    for _ in range(3):
        angle = rng.uniform(-3, 3)
        rep = oracle_plane(axes, angle, 5)
        for r, bra in enumerate(rep.basis):
            for c, ket in enumerate(rep.basis):
                assert abs(element(angle, 5, bra, ket) - rep.U[r, c]) <= 1e-10


@pytest.mark.parametrize("angle", [pi / 2, -pi / 2, pi, 1e-9])
def test_plane_degenerate_angles(angle):
    for axes, element in (((2, 3), plane_matrix_element_yz), ((1, 3), plane_matrix_element_xz)):
        rep = oracle_plane(axes, angle, 3)
        for r, bra in enumerate(rep.basis):
            for c, ket in enumerate(rep.basis):
                assert abs(element(angle, 3, bra, ket) - rep.U[r, c]) <= 1e-10


@given(st.floats(-3, 3), st.integers(0, 6))
def test_plane_level_matrices_orthogonal(angle, N):
    for axes in ((2, 3), (1, 3)):
        M = plane_level_matrix(axes, angle, N)
        assert np.max(np.abs(M.T @ M - np.eye(len(M)))) <= 1e-9


def test_plane_index_errors():
    with pytest.raises(InputError):
        plane_matrix_element_yz(0.3, 2, (2, 1), (0, 0))
