import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ndkp import equations as eq
from ndkp import LatticeParams, Selector
from ndkp.errors import NonConstantSequence
from ndkp.verify import AutonomousDeformation, Verifier

from cases import CLASSES, e1_fields, fields, params4


def const(c):
    return lambda pt: c


def random_field(seed):
    rng = np.random.default_rng(seed)
    table = rng.standard_normal((6, 6, 6)) + 1j * rng.standard_normal((6, 6, 6))
    return lambda pt: complex(table[pt[0] + 1, pt[1] + 1, pt[2] + 1])


P = params4()
PT = (1, 1, 1)
# dyadic values keep the telescoping cancellations exact in floating point
P_DYADIC = LatticeParams(base=(0, 0, 0), window=((0, 3),) * 3, p=[2, 2.5, 3, 3.5],
                         q=[3.25, 3.5, 3.75, 4], r=[5, 5.5, 6, 6.5])


def test_lpkp_constant_field_is_exact_zero():
    for c in (0, 2.5, -1 + 3j):
        assert eq.lpkp(const(c), P_DYADIC, PT).raw == 0
        assert eq.lpkp_alt(const(c), P_DYADIC, PT).raw == 0


def test_lpmkp_v_constant_field_is_exact_zero():
    assert eq.lpmkp_va(const(0.75), P_DYADIC, PT, 0).raw == 0


@given(st.integers(0, 10_000))
@settings(max_examples=50, deadline=None)
def test_phi_sum_vanishes_for_any_field(seed):
    assert eq.phi_sum(random_field(seed), P, PT).normalized <= 1e-13


@given(st.integers(0, 10_000))
@settings(max_examples=30, deadline=None)
def test_random_field_violates_lpkp_family(seed):
    u = random_field(seed)
    worst = max(eq.lpkp(u, P, PT).normalized, eq.lpkp_alt(u, P, PT).normalized,
                eq.lpkp_ratio(u, P, PT).normalized)
    assert worst > 1e-3


def test_normalization():
    r = eq.Residual([[3.0, -1.0]])
    assert r.raw == 2.0 and r.normalized == 2.0 / 4.0
    assert eq.Residual([[1.0]], [0.5, -1e-3]).min_denominator == 1e-3


def test_asym_selector_resolves_at_each_point():
    """Fixing p_{n-1} once for the whole stencil does not satisfy ASYM_V_P when p varies."""
    F = fields("soliton2")
    V = lambda x: F.v_a(x, Selector("PrevP"))
    assert eq.asym_v_p(V, P, PT).normalized <= 1e-12
    a = P.p_at(PT[0] - 1)
    fixed = lambda x: F.v_a(x, a)
    assert eq.asym_v_p(fixed, P, PT).normalized > 1e-4
    W = lambda x: F.w_b(x, Selector("NegP"))
    assert eq.asym_w_p(W, P, PT).normalized <= 1e-12
    fixed_w = lambda x: F.w_b(x, -P.p_at(PT[0]))
    assert eq.asym_w_p(fixed_w, P, PT).normalized > 1e-4


def test_sigma_exponent_sign():
    F = e1_fields()
    good = AutonomousDeformation(F).sigma
    flipped = AutonomousDeformation(F, sigma_sign=-1).sigma
    assert eq.def_sigma(good, PT).normalized <= 1e-12
    assert eq.def_sigma(flipped, PT).normalized > 1e-2


def test_nqc_zero_matches_lskp_on_z():
    F = fields("mixed")
    s = lambda x: F.s_ab(x, 0, 0)
    for pt in [(0, 0, 0), (1, 2, 0), (2, 2, 2)]:
        assert eq.nqc(s, P, pt, 0, 0).normalized <= 1e-10
        assert eq.lskp(F.z, pt).normalized <= 1e-10


def test_autonomous_needs_constant_sequences():
    with pytest.raises(NonConstantSequence):
        eq.constant_pqr(P)


def test_autonomous_forms_agree_with_general_ones_on_constant_data():
    F = e1_fields()
    Pc = F.params
    p, q, r = Pc.constants()
    u = random_field(1)
    assert abs(eq.aut_lpkp(u, p, q, r, PT).raw - eq.lpkp(u, Pc, PT).raw) < 1e-12
    v = random_field(2)
    assert abs(eq.aut_lpmkp_i(v, p, q, r, PT).raw - eq.lpmkp_va(v, Pc, PT, 0).raw) < 1e-12
    tau = random_field(3)
    assert abs(eq.aut_blkp(tau, p, q, r, PT).raw - eq.blkp(tau, Pc, PT).raw) < 1e-12


@pytest.mark.parametrize("name", sorted(CLASSES))
def test_lpkp_forms_vanish_together(name):
    F = fields(name)
    for pt in [(0, 0, 0), (2, 1, 2)]:
        assert eq.lpkp(F.u, P, pt).normalized <= 1e-10
        assert eq.lpkp_alt(F.u, P, pt).normalized <= 1e-10
        assert eq.lpkp_ratio(F.u, P, pt).normalized <= 1e-10
