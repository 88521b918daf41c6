"""Named residual checks, point selection and per-check reports.

A check is looked up by name, e.g. ``"LPKP"``, ``"NQC(1/3,1/7)"`` or
``"U_DYNA(-1,0)"``.  Each check knows the lattice offsets it touches, so
``Verifier`` can pick the interior points on which it is defined, drop
points next to a tau zero (POLE) or with a vanishing denominator
(DEGENERATE), and compare the remaining normalized residuals against the
tolerance.
"""

from __future__ import annotations

import itertools
import re
import statistics
from dataclasses import dataclass, field
from typing import Callable, Iterable

import numpy as np

from . import equations as eq
from . import numkit
from .errors import (
    DegenerateDenominator,
    GenerationFailed,
    IndexOutOfWindow,
    NdkpError,
    NonConstantSequence,
    OutOfWindow,
)
from .fields import Fields, PointEvaluator, parse_number
from .lattice import LatticePoint, Selector
from .solution import build_M, similarity_transform, sylvester_oracle, sylvester_residual

DEFAULT_TOLERANCE = 1e-10
DENOMINATOR_FLOOR = 1e-13
POLE_RTOL = 1e-8

Offset = tuple[int, int, int]

CUBE: tuple[Offset, ...] = tuple(o for o in itertools.product((0, 1), repeat=3) if sum(o) < 3)
STAR: tuple[Offset, ...] = ((0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1))
BACK_STAR: tuple[Offset, ...] = ((0, 0, 0), (-1, 0, 0), (0, -1, 0), (0, 0, -1))
PREV = {"P": (-1, 0, 0), "Q": (0, -1, 0), "R": (0, 0, -1)}


@dataclass(frozen=True)
class CheckDef:
    name: str
    family: str
    params: tuple[str, ...]
    stencil: tuple[Offset, ...]
    build: Callable
    autonomous: bool = False


REGISTRY: dict[str, CheckDef] = {}


def _register(name, family, params=(), stencil=CUBE, autonomous=False):
    def deco(fn):
        REGISTRY[name] = CheckDef(name, family, tuple(params), tuple(stencil), fn, autonomous)
        return fn
    return deco


class _Ctx:
    """Field callables for a check, with optional overrides by name."""

    def __init__(self, F: Fields, overrides: dict | None):
        self.F = F
        self.P = F.params
        self.ov = overrides or {}

    def field(self, name: str, default: Callable) -> Callable:
        return self.ov.get(name, default)


# ---------------------------------------------------------------------------
# lattice equations

@_register("LPKP", "equation")
def _(c, args):
    u = c.field("u", c.F.u)
    return lambda pt: eq.lpkp(u, c.P, pt)


@_register("LPKP_ALT", "equation")
def _(c, args):
    u = c.field("u", c.F.u)
    return lambda pt: eq.lpkp_alt(u, c.P, pt)


@_register("LPKP_RATIO", "equation")
def _(c, args):
    u = c.field("u", c.F.u)
    return lambda pt: eq.lpkp_ratio(u, c.P, pt)


@_register("LPMKP_VA_GEN", "equation", ("a",))
def _(c, args):
    a = args[0]
    va = c.field("va", lambda x: c.F.v_a(x, a))
    return lambda pt: eq.lpmkp_va(va, c.P, pt, a)


@_register("LPMKP_V", "equation")
def _(c, args):
    v = c.field("v", c.F.v)
    return lambda pt: eq.lpmkp_va(v, c.P, pt, 0)


def _asym_v(letter, fn):
    sel = Selector("Prev" + letter)

    @_register("ASYM_V_" + letter, "equation", stencil=CUBE + (PREV[letter],))
    def _(c, args):
        V = c.field("V", lambda x: c.F.v_a(x, sel))
        return lambda pt: fn(V, c.P, pt)


def _asym_w(letter, fn):
    sel = Selector("Neg" + letter)

    @_register("ASYM_W_" + letter, "equation")
    def _(c, args):
        W = c.field("W", lambda x: c.F.w_b(x, sel))
        return lambda pt: fn(W, c.P, pt)


for _letter, _fv, _fw in (("P", eq.asym_v_p, eq.asym_w_p), ("Q", eq.asym_v_q, eq.asym_w_q),
                          ("R", eq.asym_v_r, eq.asym_w_r)):
    _asym_v(_letter, _fv)
    _asym_w(_letter, _fw)


@_register("LPMKP_WB_GEN", "equation", ("b",))
def _(c, args):
    b = args[0]
    wb = c.field("wb", lambda x: c.F.w_b(x, b))
    return lambda pt: eq.lpmkp_wb(wb, c.P, pt, b)


@_register("LPMKP_W", "equation")
def _(c, args):
    w = c.field("w", c.F.w)
    return lambda pt: eq.lpmkp_wb(w, c.P, pt, 0)


def _nqc_builder(c, args):
    a, b = args
    s = c.field("s", lambda x: c.F.s_ab(x, a, b))
    return lambda pt: eq.nqc(s, c.P, pt, a, b)


_register("NQC", "equation", ("a", "b"))(_nqc_builder)
# only constant a, b are supported, where the general form reduces to the NQC one
_register("NQC_GEN", "equation", ("a", "b"))(_nqc_builder)


@_register("LSKP", "equation")
def _(c, args):
    z = c.field("z", c.F.z)
    return lambda pt: eq.lskp(z, pt)


@_register("BLKP", "equation")
def _(c, args):
    tau = c.field("tau", c.F.tau)
    return lambda pt: eq.blkp(tau, c.P, pt)


# ---------------------------------------------------------------------------
# deformed equations

@_register("DEF_X", "deformation")
def _(c, args):
    x = c.field("x", c.F.x)
    return lambda pt: eq.def_x(x, pt)


@_register("DEF_Y", "deformation")
def _(c, args):
    y = c.field("y", c.F.y)
    return lambda pt: eq.def_y(y, pt)


@_register("DEF_YP", "deformation")
def _(c, args):
    yp = c.field("yp", c.F.yp)
    return lambda pt: eq.def_yp(yp, pt)


@_register("DEF_XI", "deformation", stencil=CUBE + ((-1, 0, 0),))
def _(c, args):
    xi = c.field("xi", c.F.xi)
    return lambda pt: eq.def_xi(xi, pt)


@_register("DEF_ETA", "deformation")
def _(c, args):
    et = c.field("eta", c.F.eta)
    return lambda pt: eq.def_eta(et, pt)


@_register("DEF_ZP", "deformation", ("a", "b"))
def _(c, args):
    a, b = args
    zp = c.field("zp", lambda x: c.F.zp(x, a, b))
    return lambda pt: eq.lskp(zp, pt)


@_register("DEF_SIGMA", "deformation")
def _(c, args):
    sg = c.field("sigma", c.F.sigma)
    return lambda pt: eq.def_sigma(sg, pt)


# ---------------------------------------------------------------------------
# autonomous list and its deformations (constant sequences only)

def _aut(c):
    p, q, r = eq.constant_pqr(c.P)
    return p, q, r


@_register("AUT_LPKP", "autonomous", autonomous=True)
def _(c, args):
    p, q, r = _aut(c)
    return lambda pt: eq.aut_lpkp(c.field("u", c.F.u), p, q, r, pt)


@_register("AUT_LPMKP_I", "autonomous", autonomous=True)
def _(c, args):
    p, q, r = _aut(c)
    return lambda pt: eq.aut_lpmkp_i(c.field("v", c.F.v), p, q, r, pt)


@_register("AUT_LPMKP_II", "autonomous", autonomous=True)
def _(c, args):
    p, q, r = _aut(c)
    return lambda pt: eq.aut_lpmkp_ii(c.field("w", c.F.w), p, q, r, pt)


@_register("AUT_ASYM_I", "autonomous", autonomous=True)
def _(c, args):
    p, q, r = _aut(c)
    vp = c.field("V", lambda x: c.F.v_a(x, p))
    return lambda pt: eq.aut_asym_i(vp, p, q, r, pt)


@_register("AUT_ASYM_II", "autonomous", autonomous=True)
def _(c, args):
    p, q, r = _aut(c)
    wp = c.field("W", lambda x: c.F.w_b(x, -p))
    return lambda pt: eq.aut_asym_ii(wp, p, q, r, pt)


@_register("AUT_NQC", "autonomous", ("a", "b"), autonomous=True)
def _(c, args):
    p, q, r = _aut(c)
    a, b = args
    s = c.field("s", lambda x: c.F.s_ab(x, a, b))
    return lambda pt: eq.aut_nqc(s, p, q, r, pt, a, b)


@_register("AUT_BLKP", "autonomous", autonomous=True)
def _(c, args):
    p, q, r = _aut(c)
    return lambda pt: eq.aut_blkp(c.field("tau", c.F.tau), p, q, r, pt)


class AutonomousDeformation:
    """Deformed fields via the power-law transformations for constant p, q, r.

    Exponents count from the base point.  ``sigma_sign`` is the sign of the
    exponents in the sigma factor; +1 is the one that turns BLKP into the
    parameter-free sigma equation.
    """

    def __init__(self, F: Fields, sigma_sign: int = 1):
        self.F = F
        self.p, self.q, self.r = eq.constant_pqr(F.params)
        self.k = F.constants
        self.sigma_sign = sigma_sign

    def _rel(self, pt):
        b = self.F.params.base
        return pt[0] - b[0], pt[1] - b[1], pt[2] - b[2]

    def x(self, pt):
        n, m, h = self._rel(pt)
        return self.F.u(pt) - (self.p * n + self.q * m + self.r * h + self.k.x0)

    def y(self, pt):
        n, m, h = self._rel(pt)
        return self.F.v(pt) / (self.p ** n * self.q ** m * self.r ** h * self.k.y0)

    def yp(self, pt):
        n, m, h = self._rel(pt)
        return self.F.w(pt) / (self.p ** -n * self.q ** -m * self.r ** -h * self.k.yp0)

    def xi(self, pt):
        _, m, h = self._rel(pt)
        p, q, r = self.p, self.q, self.r
        return self.F.v_a(pt, p) / ((p - q) ** m * (r - p) ** h * self.k.xi0)

    def eta(self, pt):
        _, m, h = self._rel(pt)
        p, q, r = self.p, self.q, self.r
        return self.F.w_b(pt, -p) / ((q - p) ** -m * (r - p) ** -h * self.k.eta0)

    def zp(self, pt, a, b):
        n, m, h = self._rel(pt)
        p, q, r = self.p, self.q, self.r
        f = ((p - a) / (p + b)) ** n * ((q - a) / (q + b)) ** m * ((r - a) / (r + b)) ** h
        return (self.F.s_ab(pt, a, b) - 1 / (a + b)) / (f * self.k.zp0)

    def sigma(self, pt):
        n, m, h = self._rel(pt)
        p, q, r, e = self.p, self.q, self.r, self.sigma_sign
        f = (p - q) ** (e * n * m) * (q - r) ** (e * m * h) * (r - p) ** (e * n * h)
        return self.F.tau(pt) * f * self.k.sigma0


def _aut_def(name, eqfn, attr, params=()):
    @_register("AUT_DEF_" + name, "autonomous", params, autonomous=True)
    def _(c, args):
        D = AutonomousDeformation(c.F)
        f = getattr(D, attr)
        g = (lambda x: f(x, *args)) if args else f
        return lambda pt: eqfn(g, pt)


for _name, _fn, _attr in (("X", eq.def_x, "x"), ("Y", eq.def_y, "y"), ("YP", eq.def_yp, "yp"),
                          ("XI", eq.def_xi, "xi"), ("ETA", eq.def_eta, "eta"),
                          ("SIGMA", eq.def_sigma, "sigma")):
    _aut_def(_name, _fn, _attr)
_aut_def("ZP", eq.lskp, "zp", ("a", "b"))


# ---------------------------------------------------------------------------
# recurrences, Miura maps, Lax systems

@_register("M_DYNA", "recurrence", stencil=STAR)
def _(c, args):
    return lambda pt: eq.m_dyna(c.F, pt)


@_register("U_DYNA", "recurrence", ("i", "a"), stencil=STAR)
def _(c, args):
    i, a = args
    return lambda pt: eq.u_dyna(c.F, pt, i, a)


@_register("TU_DYNA", "recurrence", ("j", "b"), stencil=STAR)
def _(c, args):
    j, b = args
    return lambda pt: eq.tu_dyna(c.F, pt, j, b)


@_register("S_DYNA", "recurrence", ("i", "j", "a", "b"), stencil=STAR)
def _(c, args):
    return lambda pt: eq.s_dyna(c.F, pt, *args)


@_register("VA_DYNA", "recurrence", ("a",), stencil=STAR)
def _(c, args):
    return lambda pt: eq.va_dyna(c.F, pt, args[0])


@_register("WB_DYNA", "recurrence", ("b",), stencil=STAR)
def _(c, args):
    return lambda pt: eq.wb_dyna(c.F, pt, args[0])


@_register("SAB_DYNA", "recurrence", ("a", "b"), stencil=STAR)
def _(c, args):
    return lambda pt: eq.sab_dyna(c.F, pt, *args)


@_register("MU1", "miura", ("a",))
def _(c, args):
    a = args[0]
    u = c.field("u", c.F.u)
    va = c.field("va", lambda x: c.F.v_a(x, a))
    return lambda pt: eq.mu1(u, va, c.P, pt, a)


@_register("MU2", "miura", ("b",))
def _(c, args):
    b = args[0]
    u = c.field("u", c.F.u)
    wb = c.field("wb", lambda x: c.F.w_b(x, b))
    return lambda pt: eq.mu2(u, wb, c.P, pt, b)


@_register("U_TAU", "miura")
def _(c, args):
    return lambda pt: eq.u_tau(c.field("u", c.F.u), c.field("tau", c.F.tau), c.P, pt)


@_register("TAU_VW", "miura", stencil=STAR)
def _(c, args):
    return lambda pt: eq.tau_vw(c.F, pt)


def _psi(F, i, a, pot=None):
    """First component of u^(i)(a), optionally divided by a potential."""
    if pot is None:
        return lambda x: complex(F.uvec(x, i, a)[0])
    return lambda x: complex(F.uvec(x, i, a)[0]) / pot(x)


def _chi(F, j, b, pot=None):
    if pot is None:
        return lambda x: complex(F.tuvec(x, j, b)[0])
    return lambda x: complex(F.tuvec(x, j, b)[0]) / pot(x)


@_register("LAX_U", "lax")
def _(c, args):
    return lambda pt: eq.lax_u(_psi(c.F, 0, 0), c.field("u", c.F.u), c.P, pt)


@_register("LAX_TU", "lax")
def _(c, args):
    return lambda pt: eq.lax_tu(_chi(c.F, 0, 0), c.field("u", c.F.u), c.P, pt)


@_register("LAX_BLKP_U", "lax")
def _(c, args):
    return lambda pt: eq.lax_blkp_u(_psi(c.F, 0, 0), c.field("tau", c.F.tau), c.P, pt)


@_register("LAX_BLKP_TU", "lax")
def _(c, args):
    return lambda pt: eq.lax_blkp_tu(_chi(c.F, 0, 0), c.field("tau", c.F.tau), c.P, pt)


@_register("LAX_V", "lax")
def _(c, args):
    v = c.field("v", c.F.v)
    return lambda pt: eq.lax_v(_psi(c.F, -1, 0, v), v, c.P, pt)


@_register("LAX_V_ASYM", "lax", stencil=CUBE + ((-1, 0, 0),))
def _(c, args):
    sel = Selector("PrevP")
    V = c.field("V", lambda x: c.F.v_a(x, sel))
    return lambda pt: eq.lax_v_asym(_psi(c.F, -1, sel, V), V, c.P, pt)


@_register("LAX_W", "lax", stencil=BACK_STAR)
def _(c, args):
    w = c.field("w", c.F.w)
    return lambda pt: eq.lax_w(_chi(c.F, -1, 0, w), w, c.P, pt)


@_register("LAX_W_ASYM", "lax", stencil=BACK_STAR)
def _(c, args):
    sel = Selector("NegP")
    W = c.field("W", lambda x: c.F.w_b(x, sel))
    return lambda pt: eq.lax_w_asym(_chi(c.F, -1, sel, W), W, c.P, pt)


@_register("PHI_SUM", "lax")
def _(c, args):
    return lambda pt: eq.phi_sum(c.field("u", c.F.u), c.P, pt)


# ---------------------------------------------------------------------------
# name parsing


@dataclass(frozen=True)
class CheckRequest:
    name: str
    args: tuple

    @property
    def definition(self) -> CheckDef:
        return REGISTRY[self.name]

    def __str__(self) -> str:
        if not self.args:
            return self.name
        return f"{self.name}({','.join(_fmt_arg(a) for a in self.args)})"


def _fmt_arg(a) -> str:
    if isinstance(a, int):
        return str(a)
    a = complex(a)
    if a.imag == 0:
        return repr(a.real)
    return repr(a)


def parse_check(text: str) -> CheckRequest:
    m = re.fullmatch(r"\s*([A-Z_0-9]+)\s*(?:\((.*)\))?\s*", text)
    if not m or m.group(1) not in REGISTRY:
        raise ValueError(f"unknown check {text!r}")
    d = REGISTRY[m.group(1)]
    raw = [s.strip() for s in m.group(2).split(",")] if m.group(2) else []
    if len(raw) != len(d.params):
        need = f"({','.join(d.params)})" if d.params else "no arguments"
        raise ValueError(f"{d.name} takes {need}, got {len(raw)} argument(s)")
    args = []
    for kind, s in zip(d.params, raw):
        args.append(int(s) if kind in ("i", "j") else parse_number(s))
    return CheckRequest(d.name, tuple(args))


def list_checks() -> list[str]:
    out = []
    for d in REGISTRY.values():
        sig = f"({','.join(d.params)})" if d.params else ""
        out.append(f"{d.name}{sig}\t{d.family}")
    return out


# ---------------------------------------------------------------------------
# running checks


PASS, FAIL, ERROR, POLE, DEGENERATE = "PASS", "FAIL", "ERROR", "POLE", "DEGENERATE"


@dataclass
class PointResult:
    point: LatticePoint
    status: str
    raw: float = float("nan")
    normalized: float = float("nan")
    min_denominator: float = float("inf")
    message: str = ""


@dataclass
class CheckResult:
    check: str
    family: str
    tolerance: float
    points: list = field(default_factory=list)
    error: str = ""

    def _evaluated(self):
        return [p for p in self.points if p.status in (PASS, FAIL)]

    @property
    def status(self) -> str:
        if self.error or any(p.status == ERROR for p in self.points):
            return ERROR
        if not self._evaluated():
            return ERROR
        return PASS if all(p.status == PASS for p in self.points if p.status != POLE
                           and p.status != DEGENERATE) else FAIL

    @property
    def passed(self) -> bool:
        return self.status == PASS

    @property
    def max_residual(self) -> float:
        ev = self._evaluated()
        return max((p.normalized for p in ev), default=float("nan"))

    @property
    def max_raw(self) -> float:
        ev = self._evaluated()
        return max((p.raw for p in ev), default=float("nan"))

    @property
    def worst_point(self):
        ev = self._evaluated()
        return max(ev, key=lambda p: p.normalized).point if ev else None

    def count(self, status: str) -> int:
        return sum(1 for p in self.points if p.status == status)

    def summary(self) -> dict:
        wp = self.worst_point
        first_error = next((p for p in self.points if p.status == ERROR), None)
        msg = self.error or (f"{tuple(first_error.point)}: {first_error.message}" if first_error else "")
        return {
            "check": self.check,
            "family": self.family,
            "status": self.status,
            "tolerance": self.tolerance,
            "max_normalized_residual": _finite_or_none(self.max_residual),
            "max_raw_residual": _finite_or_none(self.max_raw),
            "worst_point": list(wp) if wp is not None else None,
            "evaluated": len(self._evaluated()),
            "pole_excluded": self.count(POLE),
            "degenerate_excluded": self.count(DEGENERATE),
            "errors": self.count(ERROR),
            "message": msg,
        }

    def line(self) -> str:
        return (f"{self.status:5s} {self.check:28s} max={self.max_residual:.3e} "
                f"tol={self.tolerance:.1e} n={len(self._evaluated())} "
                f"pole={self.count(POLE)} degenerate={self.count(DEGENERATE)}")


def _finite_or_none(x: float):
    return x if np.isfinite(x) else None


class Verifier:
    """Runs named checks against one solution."""

    def __init__(self, fields: Fields, tolerance: float = DEFAULT_TOLERANCE):
        self.F = fields
        self.tolerance = tolerance
        self._tau_scale = None

    @property
    def params(self):
        return self.F.params

    def tau_scale(self) -> float:
        """Median |tau| over the window, the reference for POLE flags."""
        if self._tau_scale is None:
            mags = []
            for pt in self.params.points():
                try:
                    mags.append(abs(self.F.tau(pt)))
                except NdkpError:
                    mags.append(0.0)
            self._tau_scale = statistics.median(mags)
        return self._tau_scale

    def interior(self, stencil: Iterable[Offset]) -> list[LatticePoint]:
        stencil = list(stencil)
        return [pt for pt in self.params.points()
                if all(self.params.contains(pt + o) for o in stencil)]

    def near_pole(self, pt, stencil) -> bool:
        floor = POLE_RTOL * self.tau_scale()
        for o in stencil:
            try:
                if abs(self.F.tau(pt + o)) < floor:
                    return True
            except NdkpError:
                return True
        return False

    def _resolve(self, check):
        return check if isinstance(check, CheckRequest) else parse_check(check)

    def evaluator(self, check, overrides: dict | None = None):
        req = self._resolve(check)
        return req.definition.build(_Ctx(self.F, overrides), req.args)

    def residual(self, check, point, overrides: dict | None = None) -> eq.Residual:
        """Residual at one point; raises if the stencil leaves the window."""
        req = self._resolve(check)
        pt = LatticePoint(*point)
        for o in req.definition.stencil:
            if not self.params.contains(pt + o):
                raise OutOfWindow(f"{req} at {tuple(pt)} needs {tuple(pt + o)}")
        return self.evaluator(req, overrides)(pt)

    def normalized_residual(self, check, point, overrides: dict | None = None) -> float:
        res = self.residual(check, point, overrides)
        if res.min_denominator < DENOMINATOR_FLOOR:
            raise DegenerateDenominator(
                f"denominator {res.min_denominator:.3e} at {tuple(point)} below {DENOMINATOR_FLOOR}")
        return res.normalized

    def run(self, check, points="interior", tolerance: float | None = None,
            overrides: dict | None = None) -> CheckResult:
        tol = self.tolerance if tolerance is None else tolerance
        try:
            req = self._resolve(check)
        except ValueError as exc:
            return CheckResult(str(check), "unknown", tol, error=str(exc))
        d = req.definition
        result = CheckResult(str(req), d.family, tol)
        try:
            fn = d.build(_Ctx(self.F, overrides), req.args)
        except (NdkpError, ArithmeticError, ValueError) as exc:
            result.error = f"{type(exc).__name__}: {exc}"
            return result
        if isinstance(points, str):
            if points != "interior":
                raise ValueError(f"points must be 'interior' or a list, got {points!r}")
            pts = self.interior(d.stencil)
        else:
            pts = [LatticePoint(*p) for p in points]
        if not pts:
            result.error = "no lattice point has the whole stencil inside the window"
            return result
        for pt in pts:
            result.points.append(self._evaluate(fn, d, pt, tol))
        return result

    def _evaluate(self, fn, d: CheckDef, pt: LatticePoint, tol: float) -> PointResult:
        if not all(self.params.contains(pt + o) for o in d.stencil):
            return PointResult(pt, ERROR, message="stencil leaves the window")
        if self.near_pole(pt, d.stencil):
            return PointResult(pt, POLE)
        try:
            res = fn(pt)
        except (IndexOutOfWindow, NonConstantSequence) as exc:
            return PointResult(pt, ERROR, message=f"{type(exc).__name__}: {exc}")
        except ZeroDivisionError:
            return PointResult(pt, DEGENERATE)
        except NdkpError as exc:
            return PointResult(pt, ERROR, message=f"{type(exc).__name__}: {exc}")
        mind = res.min_denominator
        if mind < DENOMINATOR_FLOOR:
            return PointResult(pt, DEGENERATE, min_denominator=mind)
        norm = res.normalized
        if not np.isfinite(norm):
            return PointResult(pt, ERROR, message="non-finite residual")
        status = PASS if norm <= tol else FAIL
        return PointResult(pt, status, raw=res.raw, normalized=norm, min_denominator=mind)

    def run_all(self, checks: Iterable, points="interior", tolerance: float | None = None):
        return [self.run(c, points, tolerance) for c in checks]


# ---------------------------------------------------------------------------
# invariance under similarity transforms and the Sylvester oracle


@dataclass
class InvarianceResult:
    seed: int
    max_deviation: float
    samples: list
    attempts: int


def _random_invertible(rng: np.random.Generator, n: int, attempts: int) -> tuple[np.ndarray, int]:
    for k in range(1, attempts + 1):
        T = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        f = numkit.lu_factor(T)
        if not f.singular and np.linalg.cond(T) < 1e6:
            return T, k
    raise GenerationFailed(f"no well-conditioned {n}x{n} transform after {attempts} attempts")


def _rel_dev(x: complex, y: complex) -> float:
    scale = max(abs(x), abs(y))
    return 0.0 if scale == 0 else abs(x - y) / scale


def invariance_check(seed: int, fields: Fields, points=None, n_samples: int = 20,
                     a: complex = 1 / 3, b: complex = 1 / 7, T1=None, T2=None,
                     max_attempts: int = 8) -> InvarianceResult:
    """Max relative change of S^(i,j)(a,b) and tau under a similarity transform.

    Samples ``n_samples`` (point, i, j) triples with i, j in {-1, 0, 1}
    using a seeded generator; T1, T2 are random unless given.
    """
    rng = np.random.default_rng(seed)
    N, Np = fields.spectral.N, fields.spectral.Nprime
    attempts = 1
    if T1 is None:
        T1, k1 = _random_invertible(rng, N, max_attempts)
        attempts = max(attempts, k1)
    if T2 is None:
        T2, k2 = _random_invertible(rng, Np, max_attempts)
        attempts = max(attempts, k2)
    pts = list(points) if points is not None else list(fields.params.points())
    samples = []
    worst = 0.0
    for _ in range(n_samples):
        pt = pts[int(rng.integers(len(pts)))]
        i, j = (int(x) for x in rng.integers(-1, 2, size=2))
        sys0 = fields.system(pt)
        e0 = fields.evaluator(pt)
        e1 = PointEvaluator(similarity_transform(sys0, T1, T2))
        ds = _rel_dev(e0.master(i, j, a, b), e1.master(i, j, a, b))
        dt = _rel_dev(e0.tau(), e1.tau())
        samples.append((tuple(pt), i, j, ds, dt))
        worst = max(worst, ds, dt)
    return InvarianceResult(seed, worst, samples, attempts)


def oracle_deviation(fields: Fields, points=None) -> tuple[float, float, LatticePoint | None]:
    """Max entrywise relative deviation of build_M from the Kronecker solve.

    Returns (max deviation, max Sylvester residual, worst point).  The
    deviation at a point is max |M - M_oracle| / max |M_oracle|.
    """
    gamma, lam = fields.spectral.gamma_lambda
    worst, worst_pt, worst_res = 0.0, None, 0.0
    for pt in (points if points is not None else fields.params.points()):
        st = build_M(fields.params, pt, fields.spectral, check=False)
        ref = sylvester_oracle(gamma, lam, st.r, st.s)
        scale = float(np.max(np.abs(ref))) or 1.0
        dev = float(np.max(np.abs(st.M - ref))) / scale
        worst_res = max(worst_res, sylvester_residual(gamma, lam, st.M, st.r, st.s))
        if dev >= worst:
            worst, worst_pt = dev, LatticePoint(*pt)
    return worst, worst_res, worst_pt
