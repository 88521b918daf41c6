import numpy as np
import pytest

from ndkp import Fields
from ndkp.errors import DegenerateDenominator, GenerationFailed, OutOfWindow
from ndkp.solution import BlockSpec, SpectralConfig
from ndkp import verify
from ndkp.verify import REGISTRY, Verifier, invariance_check, list_checks, parse_check

from cases import e1_fields, fields, params4


def test_parse_check():
    req = parse_check("NQC(1/3,1/7)")
    assert req.name == "NQC" and req.args == (1 / 3, 1 / 7)
    assert parse_check("U_DYNA(-1,0)").args == (-1, 0)
    assert parse_check("S_DYNA(1,-1,0,1/7)").args[:2] == (1, -1)
    for bad in ["LPKP(1)", "NQC", "NOPE", "U_DYNA(0)"]:
        with pytest.raises(ValueError):
            parse_check(bad)


def test_list_checks_covers_registry():
    names = [line.split("\t")[0].split("(")[0] for line in list_checks()]
    assert names == list(REGISTRY)
    for required in ["LPKP", "LPMKP_VA_GEN", "NQC_GEN", "DEF_SIGMA", "AUT_BLKP", "M_DYNA", "TAU_VW",
                     "LAX_W_ASYM"]:
        assert required in names


def test_interior_points():
    V = Verifier(fields("soliton1"))
    assert len(V.interior(verify.CUBE)) == 27
    assert len(V.interior(verify.CUBE + ((-1, 0, 0),))) == 18
    assert len(V.interior(verify.BACK_STAR)) == 27
    assert min(V.interior(verify.BACK_STAR)) == (1, 1, 1)


def test_out_of_window_and_degenerate():
    V = Verifier(fields("soliton1"))
    with pytest.raises(OutOfWindow):
        V.residual("LPKP", (3, 0, 0))
    with pytest.raises(OutOfWindow):
        V.residual("ASYM_V_P", (0, 1, 1))
    # p_2 = q_0, so the plane waves at (2,1,h) and (3,0,h) coincide and a bracket vanishes
    with pytest.raises(DegenerateDenominator):
        V.normalized_residual("LPKP_RATIO", (2, 0, 0))
    r = V.run("LPKP_RATIO")
    assert r.passed and r.count("DEGENERATE") == 3


def test_run_reports_failures_and_summary():
    F = fields("soliton2")
    V = Verifier(F)
    u = lambda x: F.u(x) + (1e-3 if tuple(x) == (2, 2, 2) else 0)
    r = V.run("LPKP", overrides={"u": u})
    assert r.status == "FAIL"
    assert r.count("FAIL") == 6 and r.max_residual > 1e-5
    s = r.summary()
    assert s["status"] == "FAIL" and s["evaluated"] == 27 and s["worst_point"] is not None


def test_pole_exclusion(monkeypatch):
    F = fields("soliton1")
    V = Verifier(F)
    real_tau = F.tau
    monkeypatch.setattr(F, "tau", lambda pt: 0.0 if tuple(pt) == (1, 1, 1) else real_tau(pt))
    r = V.run("BLKP")
    assert r.count("POLE") == 7 and r.count("PASS") == 20


def test_error_status_for_unusable_checks():
    V = Verifier(fields("soliton1"))
    r = V.run("AUT_LPKP")
    assert r.status == "ERROR" and "NonConstantSequence" in r.error
    assert V.run("NOT_A_CHECK").status == "ERROR"


def test_explicit_points():
    V = Verifier(e1_fields())
    r = V.run("TAU_VW", points=[(0, 0, 0)])
    assert r.passed and r.max_residual <= 1e-14
    assert V.run("LPKP", points=[(3, 3, 3)]).status == "ERROR"


def test_invariance_identity_and_scaling():
    F = e1_fields()
    assert invariance_check(0, F, T1=np.eye(1), T2=np.eye(1)).max_deviation == 0
    assert invariance_check(0, F, T1=np.array([[3.0]]), T2=np.array([[0.25j]])).max_deviation <= 1e-12
    assert invariance_check(5, fields("soliton2")).max_deviation <= 1e-10


def test_invariance_is_seeded():
    F = fields("jordan2")
    a, b = invariance_check(11, F), invariance_check(11, F)
    assert a.samples == b.samples


def test_generation_failure(monkeypatch):
    monkeypatch.setattr(verify.numkit, "lu_factor", lambda T: type("F", (), {"singular": True})())
    with pytest.raises(GenerationFailed):
        invariance_check(0, fields("soliton1"))


def test_vacuum_recurrences_vanish():
    F = Fields(params4(), SpectralConfig([BlockSpec.diagonal([1], [0])], [BlockSpec.diagonal([8])]))
    V = Verifier(F, 0.0)
    for name in ["M_DYNA", "U_DYNA(0,0)", "VA_DYNA(1/3)", "U_TAU"]:
        assert V.run(name).passed, name
