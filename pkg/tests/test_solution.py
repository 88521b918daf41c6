import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ndkp.errors import SingularConfiguration, SingularMatrix
from ndkp.lattice import LatticeParams
from ndkp.solution import (
    BlockSpec,
    DESystem,
    SpectralConfig,
    binomial_table,
    build_M,
    build_r_s,
    similarity_transform,
    sylvester_oracle,
    sylvester_residual,
)

from cases import CLASSES, e1_M, e1_params, e1_spectral, params4

D, J = BlockSpec.diagonal, BlockSpec.jordan


def test_e1_M_closed_form():
    P, S = e1_params(), e1_spectral()
    for pt in [(0, 0, 0), (1, 0, 0), (2, 1, 3), (3, 3, 3)]:
        st = build_M(P, pt, S)
        assert abs(st.M[0, 0] - float(e1_M(*pt))) <= 1e-14 * max(1, abs(float(e1_M(*pt))))
    assert abs(build_M(P, (1, 0, 0), S).M[0, 0] + 0.3) < 1e-15


def test_e1_M_below_base():
    P = e1_params(base=(2, 2, 2))
    st = build_M(P, (0, 1, 3), e1_spectral())
    assert abs(st.M[0, 0] - float(e1_M(-2, -1, 1))) < 1e-14


def test_m_dyna_fixture():
    # M(1,0,0) - M(0,0,0) - (1/2) r(0) s(1) = -3/10 - 1/5 - (1/2)(1)(-1) = 0
    P, S = e1_params(), e1_spectral()
    m0, m1 = build_M(P, (0, 0, 0), S), build_M(P, (1, 0, 0), S)
    assert m0.r[0, 0] == 1 and m1.s[0, 0] == -1
    assert abs(m1.M[0, 0] - m0.M[0, 0] - 0.5 * m0.r[0, 0] * m1.s[0, 0]) < 1e-15


def test_canonical_matrices_are_lower_jordan():
    gamma, lam = SpectralConfig([D([1]), J(2, 3)], [J(8, 2), D([9, 10])]).gamma_lambda
    expected = np.diag([1, 2, 2, 2]).astype(complex)
    expected[2, 1] = expected[3, 2] = 1
    np.testing.assert_array_equal(gamma, expected)
    assert lam[1, 0] == 1 and lam[2, 1] == 0


def test_binomial_table():
    B = binomial_table(6)
    assert B[6, 3] == 20 and B[5, 0] == 1 and B[4, 4] == 1


@pytest.mark.parametrize("name", sorted(CLASSES))
def test_closed_form_matches_kronecker_oracle(name):
    S = CLASSES[name]()
    P = params4()
    gamma, lam = S.gamma_lambda
    for pt in [(0, 0, 0), (3, 1, 2), (2, 3, 3)]:
        st = build_M(P, pt, S)
        ref = sylvester_oracle(gamma, lam, st.r, st.s)
        assert np.max(np.abs(st.M - ref)) <= 1e-12 * np.max(np.abs(ref))
        assert sylvester_residual(gamma, lam, st.M, st.r, st.s) <= 1e-13


def test_rectangular_random_C_and_points_below_base():
    rng = np.random.default_rng(3)
    C = rng.standard_normal((3, 2)) + 1j * rng.standard_normal((3, 2))
    S = SpectralConfig([D([1 + 0.5j]), D([2])], [J(8, 2), D([9])], C)
    P = LatticeParams(base=(2, 1, 1), window=((0, 3),) * 3, p=[2, 2.5, 3, 3.5], q=[3, 10 / 3, 11 / 3, 4],
                      r=[5, 5.5, 6, 6.5])
    gamma, lam = S.gamma_lambda
    for pt in [(0, 0, 0), (3, 3, 3), (1, 0, 2)]:
        st = build_M(P, pt, S)
        ref = sylvester_oracle(gamma, lam, st.r, st.s)
        assert np.max(np.abs(st.M - ref)) <= 1e-12 * np.max(np.abs(ref))


@given(st.lists(st.floats(0.2, 3.0), min_size=1, max_size=3, unique=True),
       st.lists(st.floats(7.6, 12.0), min_size=1, max_size=3, unique=True),
       st.integers(0, 3), st.integers(0, 3), st.integers(0, 3))
@settings(max_examples=40, deadline=None)
def test_sylvester_property_diagonal(ks, kappas, n, m, h):
    S = SpectralConfig([D(ks)], [D(kappas)], np.ones((len(kappas), len(ks))))
    st = build_M(params4(), (n, m, h), S)
    gamma, lam = S.gamma_lambda
    assert sylvester_residual(gamma, lam, st.M, st.r, st.s) <= 1e-11


def test_jordan_r_is_jet_and_s_reversed():
    S = SpectralConfig([J(1, 2)], [J(8, 2)])
    r, s, rho, varrho = build_r_s(e1_params(), (1, 0, 0), S)
    # rho(k) = 1 + k/2 at (1,0,0): value 3/2, derivative 1/2
    np.testing.assert_allclose(r.ravel(), [1.5, 0.5])
    # varrho(kappa) = 1/(1 - kappa/2): value -1/3, derivative (1/2)/(1-kappa/2)^2 = 1/18
    np.testing.assert_allclose(s.ravel(), [1 / 18, -1 / 3])


def test_similarity_transform_preserves_determining_equations():
    S = CLASSES["mixed"]()
    st = build_M(params4(), (1, 2, 1), S)
    sys0 = DESystem.from_state(st, S)
    rng = np.random.default_rng(0)
    T1 = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    T2 = rng.standard_normal((3, 3))
    t = similarity_transform(sys0, T1, T2)
    res = t.K @ t.M + t.M @ t.L - t.r @ t.s
    assert np.max(np.abs(res)) <= 1e-12 * np.max(np.abs(t.r @ t.s))
    with pytest.raises(SingularMatrix):
        similarity_transform(sys0, np.zeros((3, 3)), T2)


def test_block_and_config_validation():
    with pytest.raises(SingularConfiguration):
        D([1, 1])
    with pytest.raises(SingularConfiguration):
        J(1, 0)
    with pytest.raises(SingularConfiguration):
        D([0])
    with pytest.raises(SingularConfiguration):
        SpectralConfig([D([1])], [D([-1])])
    with pytest.raises(SingularConfiguration):
        SpectralConfig([D([1, 2])], [D([8])])
    with pytest.raises(SingularConfiguration):
        SpectralConfig([D([1])], [D([8])], np.ones((2, 2)))


def test_oracle_singular_operator():
    with pytest.raises(SingularMatrix):
        sylvester_oracle(np.eye(1), -np.eye(1), np.ones((1, 1)), np.ones((1, 1)))
