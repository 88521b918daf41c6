"""Master function, auxiliary vectors, tau and every derived lattice field.

All values are computed independently at each lattice point from the
closed-form solution; nothing is propagated, so shifts commute exactly.

Point-dependent parameters (``Selector``) are resolved at the point where
the field is evaluated.  ``v_a`` with ``a = PrevP`` is therefore the lattice
field V(n, m, h) = v_{p_{n-1}}(n, m, h), and a shifted copy such as
V(n+1, m, h) carries p_n.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import numkit
from .errors import InternalMismatch, SingularShift, TauZero, ZeroTransformFactor
from .lattice import (
    LatticeParams,
    LatticePoint,
    Selector,
    as_selector,
    range_product,
    signed_range,
    validate_params,
)
from .solution import DESystem, SolutionState, SpectralConfig, build_M

MASTER_RTOL = 1e-11
TAU_RTOL = 1e-11


@dataclass(frozen=True)
class DeformConstants:
    x0: complex = 0j
    y0: complex = 1 + 0j
    yp0: complex = 1 + 0j
    xi0: complex = 1 + 0j
    eta0: complex = 1 + 0j
    zp0: complex = 1 + 0j
    sigma0: complex = 1 + 0j
    z0: complex = 0j

    def __post_init__(self):
        for name in ("x0", "y0", "yp0", "xi0", "eta0", "zp0", "sigma0", "z0"):
            object.__setattr__(self, name, complex(getattr(self, name)))
        for name in ("y0", "yp0", "xi0", "eta0", "zp0", "sigma0"):
            if getattr(self, name) == 0:
                raise ZeroTransformFactor(f"deformation constant {name} must be nonzero")


class PointEvaluator:
    """Field evaluation on one set of determining-equation data.

    Works on raw (K, L, M, C, r, s), so it applies equally to canonical
    data and to similarity-transformed copies.
    """

    def __init__(self, system: DESystem):
        self.system = system
        K, L, M, C = system.K, system.L, system.M, system.C
        self._IMC = np.eye(K.shape[0]) + M @ C
        self._ICM = np.eye(L.shape[0]) + C @ M
        self._lu_mc = None
        self._lu_cm = None
        self._shift_lu: dict = {}
        self._cols: dict = {}
        self._rows: dict = {}
        self._u: dict = {}
        self._tu: dict = {}
        self._S: dict = {}
        self._tau = None

    @property
    def lu_mc(self) -> numkit.LUFactors:
        if self._lu_mc is None:
            self._lu_mc = numkit.lu_factor(self._IMC)
        return self._lu_mc

    @property
    def lu_cm(self) -> numkit.LUFactors:
        if self._lu_cm is None:
            self._lu_cm = numkit.lu_factor(self._ICM)
        return self._lu_cm

    def _shift_factors(self, side: str, x: complex) -> numkit.LUFactors:
        key = (side, x)
        f = self._shift_lu.get(key)
        if f is None:
            A = self.system.K if side == "K" else self.system.L
            f = numkit.lu_factor(x * np.eye(A.shape[0]) + A)
            if f.singular:
                name = "aI + K" if side == "K" else "bI + L"
                raise SingularShift(f"{name} is singular for {side == 'K' and 'a' or 'b'} = {x}")
            self._shift_lu[key] = f
        return f

    def power_col(self, i: int, a: complex) -> np.ndarray:
        """(aI + K)^i r as a flat vector."""
        key = (i, a)
        out = self._cols.get(key)
        if out is None:
            if i == 0:
                out = self.system.r.ravel().astype(np.complex128)
            elif i > 0:
                A = a * np.eye(self.system.K.shape[0]) + self.system.K
                out = A @ self.power_col(i - 1, a)
            else:
                out = self._shift_factors("K", a).solve(self.power_col(i + 1, a))
            self._cols[key] = out
        return out

    def power_row(self, j: int, b: complex) -> np.ndarray:
        """s (bI + L)^j as a flat vector."""
        key = (j, b)
        out = self._rows.get(key)
        if out is None:
            if j == 0:
                out = self.system.s.ravel().astype(np.complex128)
            elif j > 0:
                B = b * np.eye(self.system.L.shape[0]) + self.system.L
                out = self.power_row(j - 1, b) @ B
            else:
                out = self._shift_factors("L", b).solve_left(self.power_row(j + 1, b))
            self._rows[key] = out
        return out

    def uvec(self, i: int, a: complex = 0j) -> np.ndarray:
        key = (i, a)
        out = self._u.get(key)
        if out is None:
            if self.lu_mc.singular:
                raise TauZero("I + MC is singular at this point (pole of the solution)")
            out = self.lu_mc.solve(self.power_col(i, a))
            self._u[key] = out
        return out

    def tuvec(self, j: int, b: complex = 0j) -> np.ndarray:
        key = (j, b)
        out = self._tu.get(key)
        if out is None:
            if self.lu_cm.singular:
                raise TauZero("I + CM is singular at this point (pole of the solution)")
            out = self.lu_cm.solve_left(self.power_row(j, b))
            self._tu[key] = out
        return out

    def master(self, i: int, j: int, a: complex = 0j, b: complex = 0j) -> complex:
        key = (i, j, a, b)
        out = self._S.get(key)
        if out is None:
            C = self.system.C
            row, u = self.power_row(j, b), self.uvec(i, a)
            x = complex(row @ C @ u)
            y = complex(self.tuvec(j, b) @ C @ self.power_col(i, a))
            scale = max(abs(x), abs(y),
                        np.linalg.norm(row) * np.linalg.norm(C, 2) * np.linalg.norm(u))
            if abs(x - y) > MASTER_RTOL * scale:
                raise InternalMismatch(
                    f"S^({i},{j})({a},{b}): routes disagree, {x} vs {y}")
            out = x
            self._S[key] = out
        return out

    def tau(self) -> complex:
        if self._tau is None:
            t1 = self.lu_mc.det()
            t2 = self.lu_cm.det()
            had = min(float(np.prod(np.linalg.norm(self._IMC, axis=1))),
                      float(np.prod(np.linalg.norm(self._ICM, axis=1))))
            if abs(t1 - t2) > TAU_RTOL * max(abs(t1), abs(t2)) + 1e-13 * had:
                raise InternalMismatch(f"det(I+MC) = {t1} but det(I+CM) = {t2}")
            self._tau = t1
        return self._tau


# ---------------------------------------------------------------------------
# Field identifiers


FIELD_KINDS = {
    # name: (number of integer args, selector args)
    "S": (2, ("a", "b")),
    "U": (0, ()),
    "V": (0, ()),
    "W": (0, ()),
    "Va": (0, ("a",)),
    "Wb": (0, ("b",)),
    "Sab": (0, ("a", "b")),
    "Sa": (0, ("a",)),
    "Tb": (0, ("b",)),
    "Z": (0, ()),
    "Tau": (0, ()),
    "UVec0": (1, ("a",)),
    "TUVec0": (1, ("b",)),
    "X": (0, ()),
    "Y": (0, ()),
    "Yp": (0, ()),
    "Xi": (0, ()),
    "Eta": (0, ()),
    "Zp": (0, ("a", "b")),
    "Sigma": (0, ()),
}


@dataclass(frozen=True)
class FieldId:
    kind: str
    i: int = 0
    j: int = 0
    a: Selector = Selector.const(0)
    b: Selector = Selector.const(0)

    def __post_init__(self):
        if self.kind not in FIELD_KINDS:
            raise ValueError(f"unknown field {self.kind!r}")

    def __str__(self) -> str:
        nint, sels = FIELD_KINDS[self.kind]
        args = [str(x) for x in (self.i, self.j)[:nint]]
        if self.kind == "TUVec0":
            args = [str(self.j)]
        args += [str(getattr(self, s)) for s in sels]
        return f"{self.kind}({','.join(args)})" if args else self.kind

    @classmethod
    def parse(cls, text: str) -> "FieldId":
        m = re.fullmatch(r"\s*(\w+)\s*(?:\((.*)\))?\s*", text)
        if not m:
            raise ValueError(f"cannot parse field id {text!r}")
        kind, argstr = m.group(1), m.group(2)
        if kind not in FIELD_KINDS:
            raise ValueError(f"unknown field {kind!r}; known: {', '.join(FIELD_KINDS)}")
        args = [s.strip() for s in argstr.split(",")] if argstr and argstr.strip() else []
        nint, sels = FIELD_KINDS[kind]
        if len(args) not in (nint, nint + len(sels)):
            raise ValueError(f"{kind} takes {nint + len(sels)} arguments, got {len(args)}")
        ints = [int(x) for x in args[:nint]]
        rest = [parse_selector(x) for x in args[nint:]]
        kw = {}
        if kind == "S":
            kw.update(i=ints[0], j=ints[1])
        elif kind == "UVec0":
            kw.update(i=ints[0])
        elif kind == "TUVec0":
            kw.update(j=ints[0])
        for name, sel in zip(sels, rest):
            kw[name] = sel
        return cls(kind, **kw)


def parse_number(text) -> complex:
    if isinstance(text, (int, float, complex)):
        return complex(text)
    if isinstance(text, (list, tuple)) and len(text) == 2:
        return complex(float(text[0]), float(text[1]))
    t = str(text).strip().replace(" ", "")
    try:
        return complex(float(Fraction(t)))
    except (ValueError, ZeroDivisionError):
        return complex(t)


def parse_selector(text) -> Selector:
    if isinstance(text, Selector):
        return text
    t = str(text).strip()
    if t in Selector.KINDS[1:]:
        return Selector(t)
    return Selector.const(parse_number(t))


@dataclass(frozen=True)
class FieldSample:
    point: LatticePoint
    id: FieldId
    value: complex


# ---------------------------------------------------------------------------


class Fields:
    """Lattice-level evaluator for one solution.

    Parameters
    ----------
    params, spectral
        Lattice sequences and block spectral data.
    constants
        Constants of the point transformations (x0, y0, ..., z0).
    strict_zdef
        Evaluate z with the literal third sum of 1/l over the h-index
        instead of 1/r_l.
    """

    def __init__(self, params: LatticeParams, spectral: SpectralConfig,
                 constants: DeformConstants | None = None, strict_zdef: bool = False,
                 validate: bool = True):
        if validate:
            validate_params(params, spectral)
        self.params = params
        self.spectral = spectral
        self.constants = constants or DeformConstants()
        self.strict_zdef = strict_zdef
        self._states: dict = {}
        self._evals: dict = {}

    # -- per-point data ----------------------------------------------------

    def state(self, point) -> SolutionState:
        point = LatticePoint(*point)
        st = self._states.get(point)
        if st is None:
            st = build_M(self.params, point, self.spectral)
            self._states[point] = st
        return st

    def system(self, point) -> DESystem:
        return DESystem.from_state(self.state(point), self.spectral)

    def evaluator(self, point) -> PointEvaluator:
        point = LatticePoint(*point)
        ev = self._evals.get(point)
        if ev is None:
            ev = PointEvaluator(self.system(point))
            self._evals[point] = ev
        return ev

    def resolve(self, sel, point) -> complex:
        return as_selector(sel).resolve(point, self.params)

    # -- master function and vectors ----------------------------------------

    def uvec(self, point, i: int, a=0) -> np.ndarray:
        return self.evaluator(point).uvec(i, self.resolve(a, point))

    def tuvec(self, point, j: int, b=0) -> np.ndarray:
        return self.evaluator(point).tuvec(j, self.resolve(b, point))

    def S(self, point, i: int, j: int, a=0, b=0) -> complex:
        return self.evaluator(point).master(i, j, self.resolve(a, point), self.resolve(b, point))

    def tau(self, point) -> complex:
        return self.evaluator(point).tau()

    # -- named variables ----------------------------------------------------

    def u(self, point) -> complex:
        return self.S(point, 0, 0)

    def v(self, point) -> complex:
        return 1 - self.S(point, -1, 0)

    def w(self, point) -> complex:
        return 1 - self.S(point, 0, -1)

    def v_a(self, point, a) -> complex:
        return 1 - self.S(point, -1, 0, a, 0)

    def w_b(self, point, b) -> complex:
        return 1 - self.S(point, 0, -1, 0, b)

    def s_ab(self, point, a, b) -> complex:
        return self.S(point, -1, -1, a, b)

    def s_a(self, point, a) -> complex:
        return self.resolve(a, point) - self.S(point, -1, 1, a, 0)

    def t_b(self, point, b) -> complex:
        return self.S(point, 1, -1, 0, b) - self.resolve(b, point)

    def z(self, point) -> complex:
        P = self.params
        total = P.dir_sum(0, point, lambda x: 1 / x) + P.dir_sum(1, point, lambda x: 1 / x)
        if self.strict_zdef:
            idx, sign = signed_range(P.base[2], point[2])
            total += sign * sum(1 / l if l else _zero_index() for l in idx)
        else:
            total += P.dir_sum(2, point, lambda x: 1 / x)
        return self.S(point, -1, -1) - (total + self.constants.z0)

    # -- deformed variables -------------------------------------------------

    def x(self, point) -> complex:
        P = self.params
        lin = sum(P.dir_sum(d, point, lambda x: x) for d in range(3))
        return self.u(point) - (lin + self.constants.x0)

    def y(self, point) -> complex:
        return self.v(point) / _nonzero(self._power_product(point, 1) * self.constants.y0, "y")

    def yp(self, point) -> complex:
        return self.w(point) / _nonzero(self._power_product(point, -1) * self.constants.yp0, "y'")

    def xi(self, point) -> complex:
        P = self.params
        a = P.p_at(point[0] - 1)
        f = (_dir_product(P, 1, point, lambda qj: a - qj)
             * _dir_product(P, 2, point, lambda rl: rl - a) * self.constants.xi0)
        return self.v_a(point, a) / _nonzero(f, "xi")

    def eta(self, point) -> complex:
        P = self.params
        pn = P.p_at(point[0])
        f = (_dir_product(P, 1, point, lambda qj: 1 / _nonzero(qj - pn, "eta"))
             * _dir_product(P, 2, point, lambda rl: 1 / _nonzero(rl - pn, "eta"))
             * self.constants.eta0)
        return self.w_b(point, -pn) / _nonzero(f, "eta")

    def zp(self, point, a, b) -> complex:
        P = self.params
        a = self.resolve(a, point)
        b = self.resolve(b, point)
        if a + b == 0:
            raise ZeroTransformFactor("z' needs a + b != 0")
        f = self.constants.zp0
        for d in range(3):
            f *= _dir_product(P, d, point, lambda x: (x - a) / _nonzero(x + b, "z'"))
        return (self.s_ab(point, a, b) - 1 / (a + b)) / _nonzero(f, "z'")

    def sigma(self, point) -> complex:
        P = self.params
        f = (double_product(P, 0, 1, point, lambda pi, qj: pi - qj)
             * double_product(P, 1, 2, point, lambda qj, rl: qj - rl)
             * double_product(P, 2, 0, point, lambda rl, pi: rl - pi))
        return self.tau(point) * f * self.constants.sigma0

    def _power_product(self, point, exponent: int) -> complex:
        f = 1 + 0j
        for d in range(3):
            f *= _dir_product(self.params, d, point, lambda x: x if exponent > 0 else 1 / x)
        return f

    # -- generic access -----------------------------------------------------

    def value(self, point, fid: FieldId | str) -> complex:
        if isinstance(fid, str):
            fid = FieldId.parse(fid)
        point = LatticePoint(*point)
        k = fid.kind
        if k == "S":
            return self.S(point, fid.i, fid.j, fid.a, fid.b)
        if k == "UVec0":
            return complex(self.uvec(point, fid.i, fid.a)[0])
        if k == "TUVec0":
            return complex(self.tuvec(point, fid.j, fid.b)[0])
        if k == "Tau":
            return self.tau(point)
        simple = {"U": self.u, "V": self.v, "W": self.w, "Z": self.z, "X": self.x,
                  "Y": self.y, "Yp": self.yp, "Xi": self.xi, "Eta": self.eta,
                  "Sigma": self.sigma}
        if k in simple:
            return simple[k](point)
        if k == "Va":
            return self.v_a(point, fid.a)
        if k == "Wb":
            return self.w_b(point, fid.b)
        if k == "Sab":
            return self.s_ab(point, fid.a, fid.b)
        if k == "Sa":
            return self.s_a(point, fid.a)
        if k == "Tb":
            return self.t_b(point, fid.b)
        if k == "Zp":
            return self.zp(point, fid.a, fid.b)
        raise ValueError(f"unhandled field {fid}")

    def sample(self, point, fid: FieldId | str) -> FieldSample:
        if isinstance(fid, str):
            fid = FieldId.parse(fid)
        return FieldSample(LatticePoint(*point), fid, self.value(point, fid))


def _zero_index():
    raise ZeroTransformFactor("literal z sum hits 1/l with l = 0")


def _nonzero(x: complex, what: str) -> complex:
    if x == 0:
        raise ZeroTransformFactor(f"transformation factor for {what} vanishes")
    return x


def _dir_product(P: LatticeParams, d: int, point, factor) -> complex:
    def f(i):
        return _nonzero(factor(P.param(d, i)), "product")
    return range_product(f, P.base[d], point[d])


def double_product(P: LatticeParams, d1: int, d2: int, point, factor) -> complex:
    """Two-index product with the same backward extension in each index."""
    idx1, s1 = signed_range(P.base[d1], point[d1])
    idx2, s2 = signed_range(P.base[d2], point[d2])
    acc = 1 + 0j
    for i in idx1:
        for j in idx2:
            f = _nonzero(factor(P.param(d1, i), P.param(d2, j)), "double product")
            acc = acc * f if s1 * s2 > 0 else acc / f
    return acc
