import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ndkp import numkit
from ndkp.errors import NonFiniteValue, ReciprocalAtZero, SingularMatrix


def _rand(n, seed):
    rng = np.random.default_rng(seed)
    return rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))


@pytest.mark.parametrize("n", [1, 2, 3, 5, 8])
def test_lu_solve_matches_numpy(n):
    A = _rand(n, n)
    b = _rand(n, n + 100)[:, :2]
    x = numkit.lu_solve(A, b)
    np.testing.assert_allclose(x, np.linalg.solve(A, b), rtol=1e-11, atol=1e-12)


@pytest.mark.parametrize("n", [1, 3, 6])
def test_solve_left_is_right_multiplication_by_inverse(n):
    A = _rand(n, 7 + n)
    b = _rand(n, 11)[:2]
    x = numkit.lu_factor(A).solve_left(b)
    np.testing.assert_allclose(x @ A, b, atol=1e-11)


@given(st.integers(1, 6), st.integers(0, 10_000))
@settings(max_examples=40, deadline=None)
def test_determinant_matches_numpy(n, seed):
    A = _rand(n, seed)
    assert abs(numkit.determinant(A) - np.linalg.det(A)) <= 1e-10 * max(1, abs(np.linalg.det(A)))


def test_inverse():
    A = _rand(4, 3)
    np.testing.assert_allclose(numkit.inverse(A) @ A, np.eye(4), atol=1e-12)


def test_singular_matrix_flagged_not_raised():
    A = np.array([[1, 2], [2, 4]], dtype=complex)
    f = numkit.lu_factor(A)
    assert f.singular
    assert abs(f.det()) < 1e-14
    with pytest.raises(SingularMatrix):
        f.solve(np.ones(2))


def test_non_finite_rejected():
    with pytest.raises(NonFiniteValue):
        numkit.as_cmatrix([[1, np.nan], [0, 1]])


def test_shape_errors():
    with pytest.raises(ValueError):
        numkit.lu_factor(np.ones((2, 3)))
    with pytest.raises(ValueError):
        numkit.lu_solve(np.eye(2), np.ones((3, 1)))


def test_jet_product_is_taylor_of_product():
    # (1 + k)(2 + 3k) = 2 + 5k + 3k^2 at k0 = 0
    j = numkit.lift_affine(1, 1, 0, 2) * numkit.lift_affine(2, 3, 0, 2)
    np.testing.assert_allclose(j.coeffs, [2, 5, 3])


def test_jet_recip_geometric_series():
    # 1/(1 - k) = 1 + k + k^2 + ...
    j = numkit.lift_affine(1, -1, 0, 4).recip()
    np.testing.assert_allclose(j.coeffs, np.ones(5))


@given(st.floats(0.5, 3), st.floats(-2, 2), st.floats(-1, 1), st.integers(0, 5))
@settings(max_examples=50, deadline=None)
def test_jet_recip_inverts(alpha, beta, k0, order):
    x = numkit.lift_affine(alpha + 3, beta, k0, order)
    one = x * x.recip()
    expected = np.zeros(order + 1)
    expected[0] = 1
    np.testing.assert_allclose(one.coeffs, expected, atol=1e-12)


def test_jet_recip_at_zero():
    with pytest.raises(ReciprocalAtZero):
        numkit.Jet([0, 1]).recip()


def test_jet_order_mismatch():
    with pytest.raises(ValueError):
        numkit.jet_mul(numkit.Jet([1, 2]), numkit.Jet([1]))
