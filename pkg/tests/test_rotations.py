import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from krawpoly.errors import InputError, NonPrincipalRotationError, NotARotationError
from krawpoly.rotations import (
    Generator,
    check_rotation,
    euler_factors,
    euler_product,
    exp_generator,
    plane_generator,
    plane_rotation,
    random_rotation,
    real_log,
)


def test_zero_generator_gives_identity():
    assert np.array_equal(exp_generator(Generator.zero(3)), np.eye(3))


def test_yz_generator_exponential():
    theta = 0.7
    B = np.zeros((3, 3))
    # the yz block [[c, s], [-s, c]] needs B23 = +theta
    B[1, 2], B[2, 1] = theta, -theta
    assert np.allclose(exp_generator(B), plane_rotation(3, (2, 3), theta), atol=1e-15)


def test_random_generators_orthogonal(rng):
    for _ in range(100):
        A = rng.normal(size=(3, 3))
        R = exp_generator(A - A.T)
        assert np.max(np.abs(R.T @ R - np.eye(3))) <= 1e-13
        assert abs(np.linalg.det(R) - 1) <= 1e-13


def test_generator_storage():
    B = np.array([[0, 1, 2], [-1, 0, 3], [-2, -3, 0.0]])
    g = Generator.from_matrix(B)
    assert g.upper == (1.0, 2.0, 3.0)
    assert np.array_equal(g.matrix, B)
    assert np.array_equal((g + g).matrix, 2 * B)
    assert np.array_equal((0.5 * g).matrix, 0.5 * B)
    with pytest.raises(InputError):
        Generator.from_matrix(np.ones((3, 3)))
    with pytest.raises(InputError):
        Generator(3, (1.0,))


def test_plane_rotation_signs():
    chi = 0.4
    Rxz = plane_rotation(3, (1, 3), chi)
    assert Rxz[0, 2] == pytest.approx(-np.sin(chi))
    assert Rxz[2, 0] == pytest.approx(np.sin(chi))
    Ryz = plane_rotation(3, (2, 3), chi)
    assert Ryz[1, 2] == pytest.approx(np.sin(chi))
    assert np.array_equal(plane_rotation(3, (2, 3), 0.0), np.eye(3))


def test_tratnik_product_zero_entry():
    C = plane_rotation(3, (2, 3), 0.5) @ plane_rotation(3, (1, 3), 0.8)
    assert C[0, 1] == 0.0


@pytest.mark.parametrize("axes", [(3, 2), (0, 1), (1, 4), (2, 2)])
def test_plane_rotation_bad_axes(axes):
    with pytest.raises(InputError):
        plane_rotation(3, axes, 0.1)


def test_plane_generator_matches_rotation():
    for axes in [(1, 2), (1, 3), (2, 3)]:
        assert np.allclose(exp_generator(plane_generator(3, axes, 0.9)), plane_rotation(3, axes, 0.9), atol=1e-15)
    assert np.allclose(exp_generator(plane_generator(5, (2, 5), 0.3)), plane_rotation(5, (2, 5), 0.3), atol=1e-15)


def test_euler_product():
    assert np.allclose(euler_product((0, 0, 0)), np.eye(3))
    th, ch = 0.3, 1.2
    assert np.allclose(
        euler_product((0, th, ch)), plane_rotation(3, (2, 3), th) @ plane_rotation(3, (1, 3), ch), atol=1e-15
    )
    phi = -0.6
    expected = plane_rotation(3, (1, 3), phi) @ plane_rotation(3, (2, 3), th) @ plane_rotation(3, (1, 3), ch)
    assert np.array_equal(euler_product((phi, th, ch)), expected)
    from_factors = np.eye(3)
    for g in euler_factors((phi, th, ch)):
        from_factors = from_factors @ exp_generator(g)
    assert np.allclose(from_factors, expected, atol=1e-14)


@given(st.tuples(*[st.floats(-10, 10)] * 3))
def test_euler_product_proper(angles):
    R = euler_product(angles)
    assert np.max(np.abs(R.T @ R - np.eye(3))) <= 1e-13
    assert abs(np.linalg.det(R) - 1) <= 1e-13


def test_disjoint_planes_commute():
    g = plane_generator(4, (1, 2), 0.4) + plane_generator(4, (3, 4), -1.1)
    prod = plane_rotation(4, (1, 2), 0.4) @ plane_rotation(4, (3, 4), -1.1)
    assert np.allclose(exp_generator(g), prod, atol=1e-15)


def test_real_log_examples():
    assert np.allclose(real_log(np.eye(3)).matrix, 0)
    B = real_log(plane_rotation(3, (2, 3), 0.3)).matrix
    expected = np.zeros((3, 3))
    expected[1, 2], expected[2, 1] = 0.3, -0.3
    assert np.allclose(B, expected, atol=1e-14)


def test_real_log_roundtrip(rng):
    worst = 0.0
    for _ in range(100):
        A = rng.normal(size=(4, 4)) * 0.3
        R = exp_generator(A - A.T)
        worst = max(worst, np.max(np.abs(exp_generator(real_log(R)) - R)))
    assert worst <= 1e-10


@settings(max_examples=50)
@given(st.integers(0, 2**32 - 1), st.integers(3, 5))
def test_real_log_roundtrip_haar(seed, size):
    R = random_rotation(size, np.random.default_rng(seed))
    try:
        B = real_log(R)
    except NonPrincipalRotationError:
        return
    assert np.max(np.abs(exp_generator(B) - R)) <= 1e-10


def test_real_log_rejects_pi():
    with pytest.raises(NonPrincipalRotationError):
        real_log(plane_rotation(3, (1, 2), np.pi))
    with pytest.raises(NonPrincipalRotationError):
        real_log(np.diag([-1.0, -1.0, 1.0]))


def test_check_rotation():
    with pytest.raises(NotARotationError):
        check_rotation(np.diag([1.0, 1.0, -1.0]))
    with pytest.raises(NotARotationError):
        check_rotation(np.ones((3, 3)))
    with pytest.raises(NotARotationError):
        check_rotation(np.ones(3))


def test_random_rotation_min_abs(rng):
    R = random_rotation(4, rng, min_abs=0.1)
    assert np.min(np.abs(R)) >= 0.1
    check_rotation(R)
