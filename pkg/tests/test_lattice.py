import pytest
from hypothesis import given, settings, strategies as st

from ndkp.errors import IndexOutOfWindow, SingularConfiguration, ZeroFactorInInverseRange
from ndkp.lattice import LatticeParams, LatticePoint, Selector, range_product, range_sum, validate_params
from ndkp.solution import BlockSpec, SpectralConfig

from cases import SEQ4, params4


def f(i):
    return 3.0 + 0.5 * i


@given(st.integers(-4, 4), st.integers(-4, 4), st.integers(-4, 4))
@settings(max_examples=100)
def test_range_product_composes(a, b, c):
    lhs = range_product(f, a, c)
    rhs = range_product(f, a, b) * range_product(f, b, c)
    assert abs(lhs - rhs) <= 1e-12 * max(1, abs(lhs))


@given(st.integers(-4, 4), st.integers(-4, 4), st.integers(-4, 4))
@settings(max_examples=100)
def test_range_sum_composes(a, b, c):
    assert abs(range_sum(f, a, c) - (range_sum(f, a, b) + range_sum(f, b, c))) < 1e-12


def test_range_product_values():
    assert range_product(f, 0, 0) == 1
    assert range_product(f, 0, 2) == 3.0 * 3.5
    assert range_product(f, 0, -2) == 1 / (2.0 * 2.5)
    assert range_sum(f, 0, -2) == -(2.0 + 2.5)


def test_backward_zero_factor():
    with pytest.raises(ZeroFactorInInverseRange):
        range_product(lambda i: i + 1, 0, -1)


def test_params_lookup_and_window():
    P = params4()
    assert P.p_at(2) == 3 and P.q_at(3) == 4 and P.r_at(0) == 5
    assert P.pqr((1, 2, 3)) == (2.5, 11 / 3, 6.5)
    with pytest.raises(IndexOutOfWindow):
        P.p_at(4)
    pts = list(P.points())
    assert len(pts) == 64 and pts[0] == (0, 0, 0) and pts[1] == (0, 0, 1) and pts[-1] == (3, 3, 3)


def test_params_rejects_bad_shapes():
    with pytest.raises(SingularConfiguration):
        LatticeParams(base=(0, 0, 0), window=((0, 3),) * 3, p=[1, 2], q=SEQ4["q"], r=SEQ4["r"])
    with pytest.raises(SingularConfiguration):
        LatticeParams(base=(5, 0, 0), window=((0, 3),) * 3, **SEQ4)


def test_selectors():
    P = params4()
    pt = LatticePoint(2, 1, 3)
    assert Selector("PrevP").resolve(pt, P) == 2.5
    assert Selector("PrevQ").resolve(pt, P) == 3
    assert Selector("PrevR").resolve(pt, P) == 6
    assert Selector("NegP").resolve(pt, P) == -3
    assert Selector("NegR").resolve(pt, P) == -6.5
    assert Selector.const(0.25).resolve(pt, P) == 0.25
    assert Selector("PrevQ").offset() == (0, -1, 0)
    with pytest.raises(ValueError):
        Selector("Next")


def test_validate_params_clauses():
    spec = SpectralConfig([BlockSpec.diagonal([1])], [BlockSpec.diagonal([4])])
    bad_p = LatticeParams(base=(0, 0, 0), window=((0, 1), (0, 0), (0, 0)), p=[-1, 2], q=[3], r=[5])
    with pytest.raises(SingularConfiguration, match="p_0 I \\+ K"):
        validate_params(bad_p, spec)
    bad_kappa = LatticeParams(base=(0, 0, 0), window=((0, 1), (0, 0), (0, 0)), p=[4, 2], q=[3], r=[5])
    with pytest.raises(SingularConfiguration, match="p_0 I - L"):
        validate_params(bad_kappa, spec)
    zero = LatticeParams(base=(0, 0, 0), window=((0, 0),) * 3, p=[0], q=[3], r=[5])
    with pytest.raises(SingularConfiguration, match="nonzero"):
        validate_params(zero)
    with pytest.raises(SingularConfiguration, match="a = -k"):
        validate_params(params4(), spec, extra_a=[-1])
    with pytest.raises(SingularConfiguration, match="b = -kappa"):
        validate_params(params4(), spec, extra_b=[-4])
    # the last window index is only ever a coefficient, never a plane-wave factor
    top = LatticeParams(base=(0, 0, 0), window=((0, 1), (0, 0), (0, 0)), p=[2, 4], q=[3], r=[5])
    validate_params(top, spec)
