import numpy as np
import pytest

from krawpoly import bivariate as bi
from krawpoly import multivariate as mv
from krawpoly.errors import InconsistencyError, InputError, NonGenericRotationError
from krawpoly.fock_basis import enumerate_basis
from krawpoly.rotations import random_rotation
from oracles import amplitude_direct, kron_representation


@pytest.fixture
def R4(rng):
    return random_rotation(4, rng, min_abs=0.1)


def test_amplitude_d(R4, generic_R):
    for N in range(4):
        assert mv.amplitude_d(R4, N, (0, 0, 0)) == pytest.approx(R4[3, 3] ** N, rel=1e-14)
    for i in enumerate_basis(3, 4):
        assert mv.amplitude_d(R4, 4, i) == pytest.approx(amplitude_direct(R4, 4, i), rel=1e-13)
    assert abs(np.sum(mv.amplitude_d_vector(R4, 4) ** 2) - 1) <= 1e-12
    for i, k in enumerate_basis(2, 3):
        assert mv.amplitude_d(generic_R, 3, (i, k)) == bi.amplitude(generic_R, 3, i, k)


def test_P00_is_one(R4):
    P = mv.build_P_raising_d(R4, 3)
    assert np.array_equal(P.values[0], np.ones(len(P.basis)))


def test_orthonormality_and_oracle(R4, rng):
    for N in range(6):
        P = mv.build_P_raising_d(R4, N)
        assert mv.orthonormality_residual_d(P) <= 1e-9
        assert mv.factorization_residual_d(P) <= 1e-9
    R5 = random_rotation(5, rng, 0.1)
    P = mv.build_P_raising_d(R5, 2)
    W = mv.amplitude_d_vector(R5, 2)
    assert np.max(np.abs(kron_representation(R5, 2) - W[:, None] * P.values.T)) <= 1e-10


def test_raising_vs_oracle(R4):
    for N in range(5):
        a = mv.build_P_raising_d(R4, N).values
        b = mv.build_P_oracle_d(R4, N).values
        assert np.max(np.abs(a - b) / np.maximum(1, np.abs(a))) <= 1e-9


def test_d2_delegation(generic_R):
    for N in range(5):
        own = mv.build_P_d(generic_R, N, delegate=False).values
        delegated = mv.build_P_d(generic_R, N).values
        assert np.max(np.abs(own - delegated)) <= 1e-10
        q = mv.Q_via_generating_d(generic_R, N).values
        assert np.max(np.abs(q - bi.Q_via_generating(generic_R, N).values)) <= 1e-12


def test_auto_route_falls_back():
    R = np.eye(4)
    with pytest.raises(NonGenericRotationError):
        mv.build_P_raising_d(R, 2)
    # the oracle route is always defined, and fails only in the factorization
    with pytest.raises(InconsistencyError):
        mv.build_P_d(R, 2)
    assert mv.build_P_d(R, 0).values[0, 0] == pytest.approx(1.0)
    with pytest.raises(InputError):
        mv.build_P_d(R, 1, route="magic")


def test_q_routes(R4):
    N = 3
    P = mv.build_P_raising_d(R4, N)
    Q = mv.P_to_Q_d(P)
    gen = mv.Q_via_generating_d(R4, N)
    hyp = mv.Q_via_hypergeometric_d(R4, N)
    assert np.allclose(gen.values[0], 1.0) and np.allclose(gen.values[:, 0], 1.0)
    for other in (gen, hyp):
        assert np.max(np.abs(Q.values - other.values) / np.maximum(1, np.abs(Q.values))) <= 1e-8
    assert np.allclose(mv.Q_to_P_d(Q).values, P.values, rtol=1e-15, atol=0)


def test_u_matrix_d(R4):
    u = mv.u_matrix_d(R4)
    assert u[1, 2] == pytest.approx(R4[1, 2] * R4[3, 3] / (R4[1, 3] * R4[3, 2]))


def test_duality_d(R4, rng):
    assert mv.duality_residual_d(R4, 3) <= 1e-9
    R5 = random_rotation(5, rng, 0.1)
    q = mv.Q_via_generating_d(R5, 3).values
    qt = mv.Q_via_generating_d(R5.T, 3).values
    assert np.max(np.abs(q - qt.T) / np.maximum(1, np.abs(q))) <= 1e-9


def test_size_limits():
    with pytest.raises(InputError):
        mv.build_P_raising_d(np.eye(6), 1)
    with pytest.raises(InputError):
        mv.Q_via_generating_d(np.eye(4), 13)
