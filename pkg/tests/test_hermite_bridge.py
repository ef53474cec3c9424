import warnings

import numpy as np
import pytest

from krawpoly import bivariate as bi
from krawpoly import hermite_bridge as hb
from krawpoly.errors import InputError


@pytest.mark.parametrize("order", [1, 2, 5, 12, 32])
def test_rule_matches_numpy(order):
    rule = hb.gauss_hermite(order)
    x, w = np.polynomial.hermite.hermgauss(order)
    assert np.allclose(rule.nodes, x, atol=1e-12)
    assert np.allclose(rule.weights, w, rtol=1e-10, atol=1e-14)
    assert rule.weights.sum() == pytest.approx(np.sqrt(np.pi), rel=1e-13)
    assert hb.gauss_hermite(order) is rule
    with pytest.raises(ValueError):
        rule.nodes[0] = 1.0


def test_rule_bounds():
    for bad in (0, 33):
        with pytest.raises(InputError):
            hb.gauss_hermite(bad)


def test_expansion_trivial_cases(generic_R):
    assert hb.hermite_expansion_residual(generic_R, 0, 0, 0, (0.3, -0.2, 1.1)) == pytest.approx(0.0, abs=1e-14)
    for m, n in ((0, 0), (1, 0), (0, 1)):
        assert hb.hermite_expansion_residual(generic_R, 1, m, n, (0.0, 0.0, 0.0)) == 0.0


def test_expansion_random_points(generic_R, rng):
    P = bi.build_P_raising(generic_R, 3)
    worst = 0.0
    for _ in range(20):
        x = rng.normal(size=3)
        for m, n in P.basis:
            worst = max(worst, abs(hb.hermite_expansion_residual(generic_R, 3, m, n, x, family=P)))
    assert worst <= 1e-8


def test_integral_unit_entry(generic_R):
    for N in range(4):
        assert hb.P_via_integral(generic_R, N, 0, 0, 0, 0).value == pytest.approx(1.0, abs=1e-10)


def test_integral_matches_tables(generic_R):
    for N in (2, 4):
        P = bi.build_P_raising(generic_R, N)
        for m, n in P.basis:
            for i, k in P.basis:
                res = hb.P_via_integral(generic_R, N, m, n, i, k)
                assert res.exact
                assert abs(res.value - P(m, n, i, k)) / max(1.0, abs(P(m, n, i, k))) <= 1e-8


def test_integral_low_order_is_flagged(generic_R):
    N = 3
    P = bi.build_P_raising(generic_R, N)
    worst = 0.0
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        for m, n in P.basis:
            for i, k in P.basis:
                res = hb.P_via_integral(generic_R, N, m, n, i, k, order=N)
                assert not res.exact and "not exact" in res.note
                worst = max(worst, abs(res.value - P(m, n, i, k)))
    assert caught and all(issubclass(w.category, RuntimeWarning) for w in caught)
    assert worst > 1e-4
