"""Sum-to-zero forms of the lattice equations, recurrences, Miura maps and Lax systems.

Every function returns a :class:`Residual`: one or more relations, each a
list of terms that should add up to zero, plus any denominators that were
cleared or divided by.  Lattice equations take plain field callables
``f(point) -> complex`` so that arbitrary (non-solution) fields can be fed
through the same stencils; the vector recurrences and Lax systems take a
:class:`~ndkp.fields.Fields` evaluator.

Shift notation in local names: ``1`` is the n-shift, ``2`` the m-shift,
``3`` the h-shift; ``f12`` is f shifted in n and m.  Brackets that are
themselves shifted are evaluated as lattice functions at the shifted point,
parameters included.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import NonConstantSequence
from .lattice import E1, E2, E3, LatticeParams, LatticePoint

Field = Callable[[LatticePoint], complex]


@dataclass
class Residual:
    relations: list
    denominators: list = field(default_factory=list)

    @property
    def normalized(self) -> float:
        """max over relations of |sum of terms| / (1 + max |term|)."""
        worst = 0.0
        for terms in self.relations:
            mags = [abs(t) for t in terms]
            worst = max(worst, abs(sum(terms)) / (1.0 + max(mags)))
        return worst

    @property
    def raw(self) -> float:
        return max(abs(sum(terms)) for terms in self.relations)

    @property
    def min_denominator(self) -> float:
        return min((abs(d) for d in self.denominators), default=float("inf"))


class Cube:
    """Neighbouring points of ``pt`` used by the three-direction stencils."""

    __slots__ = ("o", "t", "h", "b", "th", "tb", "hb", "dt", "dh", "db")

    def __init__(self, pt):
        o = LatticePoint(*pt)
        self.o = o
        self.t, self.h, self.b = o + E1, o + E2, o + E3
        self.th, self.tb, self.hb = o.shift(1, 1, 0), o.shift(1, 0, 1), o.shift(0, 1, 1)
        self.dt, self.dh, self.db = o.shift(-1, 0, 0), o.shift(0, -1, 0), o.shift(0, 0, -1)


def _shifted(f: Field, c: Cube):
    return f(c.o), f(c.t), f(c.h), f(c.b), f(c.th), f(c.tb), f(c.hb)


# ---------------------------------------------------------------------------
# lattice potential KP


def lpkp(u: Field, P: LatticeParams, pt) -> Residual:
    c = Cube(pt)
    p, q, r = P.pqr(c.o)
    _, u1, u2, u3, u12, u13, u23 = _shifted(u, c)
    return Residual([[(p - u1) * (q - r + u13 - u12),
                      (q - u2) * (r - p + u12 - u23),
                      (r - u3) * (p - q + u23 - u13)]])


def lpkp_alt(u: Field, P: LatticeParams, pt) -> Residual:
    c = Cube(pt)
    p, q, r = P.pqr(c.o)
    _, u1, u2, u3, u12, u13, u23 = _shifted(u, c)
    return Residual([[(p + u23) * (q - r + u3 - u2),
                      (q + u13) * (r - p + u1 - u3),
                      (r + u12) * (p - q + u2 - u1)]])


def _phis(u: Field, P: LatticeParams, x):
    """(phi1, phi2, phi3) at point x."""
    c = Cube(x)
    p, q, r = P.pqr(c.o)
    u1, u2, u3 = u(c.t), u(c.h), u(c.b)
    return q - r + u3 - u2, r - p + u1 - u3, p - q + u2 - u1


def lpkp_ratio(u: Field, P: LatticeParams, pt) -> Residual:
    c = Cube(pt)

    def A(x):
        p, _, r = P.pqr(x)
        return p - r + u(x + E3) - u(x + E1)

    def B(x):
        _, q, r = P.pqr(x)
        return q - r + u(x + E3) - u(x + E2)

    def Cc(x):
        p, q, _ = P.pqr(x)
        return p - q + u(x + E2) - u(x + E1)

    a0, b0, c0 = A(c.o), B(c.o), Cc(c.o)
    bt = B(c.t)
    return Residual([[A(c.h) * b0, -bt * a0], [bt * c0, -Cc(c.b) * b0]], [a0, b0, c0])


def phi_sum(u: Field, P: LatticeParams, pt) -> Residual:
    """T1 phi1 + T2 phi2 + T3 phi3, identically zero for any field u."""
    c = Cube(pt)
    # T1 leaves q, r unchanged (and cyclically), so the parameters are read at pt
    p, q, r = P.pqr(c.o)
    u12, u13, u23 = u(c.th), u(c.tb), u(c.hb)
    return Residual([[q - r + u13 - u12, r - p + u12 - u23, p - q + u23 - u13]])


# ---------------------------------------------------------------------------
# lattice potential modified KP, first kind (v-type)


def lpmkp_va(va: Field, P: LatticeParams, pt, a: complex) -> Residual:
    """General v_a equation for a constant parameter a (a = 0 gives v)."""
    c = Cube(pt)
    p, q, r = P.pqr(c.o)
    _, v1, v2, v3, v12, v13, v23 = _shifted(va, c)
    return Residual([[((p - a) * v2 - (q - a) * v1) / v12,
                      ((r - a) * v1 - (p - a) * v3) / v13,
                      ((q - a) * v3 - (r - a) * v2) / v23]], [v12, v13, v23])


def asym_v_p(V: Field, P: LatticeParams, pt) -> Residual:
    """V(n,m,h) = v_{p_{n-1}}(n,m,h)."""
    c = Cube(pt)
    p, q, r = P.pqr(c.o)
    a = P.p_at(c.o.n - 1)
    _, V1, V2, V3, V12, V13, V23 = _shifted(V, c)
    return Residual([[(p - q) * V1 / V12,
                      (r - p) * V1 / V13,
                      ((q - a) * V3 - (r - a) * V2) / V23]], [V12, V13, V23])


def asym_v_q(V: Field, P: LatticeParams, pt) -> Residual:
    """V(n,m,h) = v_{q_{m-1}}(n,m,h)."""
    c = Cube(pt)
    p, q, r = P.pqr(c.o)
    a = P.q_at(c.o.m - 1)
    _, V1, V2, V3, V12, V13, V23 = _shifted(V, c)
    return Residual([[(p - q) * V2 / V12,
                      ((r - a) * V1 - (p - a) * V3) / V13,
                      (q - r) * V2 / V23]], [V12, V13, V23])


def asym_v_r(V: Field, P: LatticeParams, pt) -> Residual:
    """V(n,m,h) = v_{r_{h-1}}(n,m,h)."""
    c = Cube(pt)
    p, q, r = P.pqr(c.o)
    a = P.r_at(c.o.h - 1)
    _, V1, V2, V3, V12, V13, V23 = _shifted(V, c)
    return Residual([[((p - a) * V2 - (q - a) * V1) / V12,
                      (r - p) * V3 / V13,
                      (q - r) * V3 / V23]], [V12, V13, V23])


# ---------------------------------------------------------------------------
# lattice potential modified KP, second kind (w-type)


def _ratio_chain(f: Field, coef: Callable, pt) -> Residual:
    """A^/(f^ A) = B~/(f~ B) = C-/(f- C), cross-multiplied.

    A = c1 f~ - c3 f-, B = c2 f^ - c3 f-, C = c1 f~ - c2 f^ with
    ``coef(x) -> (c1, c2, c3)`` evaluated at the bracket's own point.
    """
    c = Cube(pt)

    def A(x):
        c1, _, c3 = coef(x)
        return c1 * f(x + E1) - c3 * f(x + E3)

    def B(x):
        _, c2, c3 = coef(x)
        return c2 * f(x + E2) - c3 * f(x + E3)

    def Cc(x):
        c1, c2, _ = coef(x)
        return c1 * f(x + E1) - c2 * f(x + E2)

    a0, b0, c0 = A(c.o), B(c.o), Cc(c.o)
    f1, f2, f3 = f(c.t), f(c.h), f(c.b)
    bt = B(c.t)
    return Residual([[A(c.h) * f1 * b0, -bt * f2 * a0],
                     [bt * f3 * c0, -Cc(c.b) * f1 * b0]],
                    [a0, b0, c0, f1, f2, f3])


def lpmkp_wb(wb: Field, P: LatticeParams, pt, b: complex) -> Residual:
    """General w_b equation for a constant parameter b (b = 0 gives w)."""
    return _ratio_chain(wb, lambda x: tuple(s + b for s in P.pqr(x)), pt)


def asym_w_p(W: Field, P: LatticeParams, pt) -> Residual:
    """W(n,m,h) = w_{-p_n}(n,m,h)."""
    c = Cube(pt)

    def X(x):
        p, q, r = P.pqr(x)
        return (q - p) * W(x + E2) - (r - p) * W(x + E3)

    x0 = X(c.o)
    W1, W2, W3, W23 = W(c.t), W(c.h), W(c.b), W(c.hb)
    return Residual([[W23 * W1 * x0, -X(c.t) * W2 * W3]], [W2, W3, x0])


def asym_w_q(W: Field, P: LatticeParams, pt) -> Residual:
    """W(n,m,h) = w_{-q_m}(n,m,h)."""
    c = Cube(pt)

    def X(x):
        p, q, r = P.pqr(x)
        return (p - q) * W(x + E1) - (r - q) * W(x + E3)

    x0 = X(c.o)
    W1, W2, W3, W13 = W(c.t), W(c.h), W(c.b), W(c.tb)
    return Residual([[W13 * W2 * x0, -X(c.h) * W1 * W3]], [W1, W3, x0])


def asym_w_r(W: Field, P: LatticeParams, pt) -> Residual:
    """W(n,m,h) = w_{-r_h}(n,m,h)."""
    c = Cube(pt)

    def X(x):
        p, q, r = P.pqr(x)
        return (p - r) * W(x + E1) - (q - r) * W(x + E2)

    x0 = X(c.o)
    W1, W2, W3, W12 = W(c.t), W(c.h), W(c.b), W(c.th)
    return Residual([[W12 * W3 * x0, -X(c.b) * W1 * W2]], [W1, W2, x0])


# ---------------------------------------------------------------------------
# NQC, Schwarzian and bilinear forms


def nqc(s: Field, P: LatticeParams, pt, a: complex, b: complex) -> Residual:
    c = Cube(pt)

    def Y(d, x):
        e = (E1, E2, E3)[d]
        k = P.pqr(x)[d]
        return 1 + (k - a) * s(x) - (k + b) * s(x + e)

    y1h, y1b = Y(0, c.h), Y(0, c.b)
    y2t, y2b = Y(1, c.t), Y(1, c.b)
    y3t, y3h = Y(2, c.t), Y(2, c.h)
    return Residual([[y1h * y3t * y2b, -y2t * y3h * y1b]], [y1b, y3t, y2b])


def lskp(z: Field, pt) -> Residual:
    c = Cube(pt)
    _, z1, z2, z3, z12, z13, z23 = _shifted(z, c)
    d1, d2, d3 = z1 - z12, z3 - z13, z2 - z23
    return Residual([[(z2 - z12) * (z1 - z13) * (z3 - z23), -d1 * d2 * d3]], [d1, d2, d3])


def blkp(tau: Field, P: LatticeParams, pt) -> Residual:
    c = Cube(pt)
    p, q, r = P.pqr(c.o)
    _, t1, t2, t3, t12, t13, t23 = _shifted(tau, c)
    return Residual([[(p - q) * t12 * t3, (q - r) * t23 * t1, (r - p) * t13 * t2]])


# ---------------------------------------------------------------------------
# parameter-free deformed equations


def def_x(x: Field, pt) -> Residual:
    c = Cube(pt)
    _, x1, x2, x3, x12, x13, x23 = _shifted(x, c)
    return Residual([[x1 * (x12 - x13), x2 * (x23 - x12), x3 * (x13 - x23)]])


def def_y(y: Field, pt) -> Residual:
    c = Cube(pt)
    _, y1, y2, y3, y12, y13, y23 = _shifted(y, c)
    return Residual([[(y2 - y1) / y12, (y1 - y3) / y13, (y3 - y2) / y23]], [y12, y13, y23])


def def_yp(yp: Field, pt) -> Residual:
    return _ratio_chain(yp, lambda x: (1, 1, 1), pt)


def def_xi(xi: Field, pt) -> Residual:
    c = Cube(pt)
    _, x1, x2, x3, x12, x13, x23 = _shifted(xi, c)
    return Residual([[x1 / x12, x1 / x13, -(x2 + x3) / x23]], [x12, x13, x23])


def def_eta(eta: Field, pt) -> Residual:
    c = Cube(pt)
    _, e1, e2, e3, e12, e13, e23 = _shifted(eta, c)
    return Residual([[e23 * e1 * (e2 - e3), -(e12 - e13) * e2 * e3]], [e2, e3, e2 - e3])


def def_sigma(sigma: Field, pt) -> Residual:
    c = Cube(pt)
    _, s1, s2, s3, s12, s13, s23 = _shifted(sigma, c)
    return Residual([[s12 * s3, s23 * s1, s13 * s2]])


# ---------------------------------------------------------------------------
# autonomous list (constant p, q, r)


def constant_pqr(P: LatticeParams) -> tuple[complex, complex, complex]:
    if not P.is_constant():
        raise NonConstantSequence("autonomous equations need constant p, q, r sequences")
    return P.constants()


def aut_lpkp(u: Field, p, q, r, pt) -> Residual:
    c = Cube(pt)
    _, u1, u2, u3, u12, u13, u23 = _shifted(u, c)
    return Residual([[(p - u1) * (q - r + u13 - u12),
                      (q - u2) * (r - p + u12 - u23),
                      (r - u3) * (p - q + u23 - u13)]])


def aut_lpmkp_i(v: Field, p, q, r, pt) -> Residual:
    c = Cube(pt)
    _, v1, v2, v3, v12, v13, v23 = _shifted(v, c)
    return Residual([[(p * v2 - q * v1) / v12, (r * v1 - p * v3) / v13,
                      (q * v3 - r * v2) / v23]], [v12, v13, v23])


def aut_lpmkp_ii(w: Field, p, q, r, pt) -> Residual:
    c = Cube(pt)
    _, w1, w2, w3, w12, w13, w23 = _shifted(w, c)
    A, B, Cc = p * w1 - r * w3, q * w2 - r * w3, p * w1 - q * w2
    Ah = p * w12 - r * w23
    Bt = q * w12 - r * w13
    Cb = p * w13 - q * w23
    return Residual([[Ah * w1 * B, -Bt * w2 * A], [Bt * w3 * Cc, -Cb * w1 * B]],
                    [A, B, Cc, w1, w2, w3])


def aut_asym_i(vp: Field, p, q, r, pt) -> Residual:
    c = Cube(pt)
    _, v1, v2, v3, v12, v13, v23 = _shifted(vp, c)
    return Residual([[(p - q) * v1 / v12, (r - p) * v1 / v13,
                      ((q - p) * v3 - (r - p) * v2) / v23]], [v12, v13, v23])


def aut_asym_ii(wp: Field, p, q, r, pt) -> Residual:
    c = Cube(pt)
    _, w1, w2, w3, w12, w13, w23 = _shifted(wp, c)
    X = (q - p) * w2 - (r - p) * w3
    Xt = (q - p) * w12 - (r - p) * w13
    return Residual([[w23 * w1 * X, -Xt * w2 * w3]], [w2, w3, X])


def aut_nqc(s: Field, p, q, r, pt, a, b) -> Residual:
    c = Cube(pt)
    s0, s1, s2, s3, s12, s13, s23 = _shifted(s, c)
    y1h = 1 + (p - a) * s2 - (p + b) * s12
    y1b = 1 + (p - a) * s3 - (p + b) * s13
    y2t = 1 + (q - a) * s1 - (q + b) * s12
    y2b = 1 + (q - a) * s3 - (q + b) * s23
    y3t = 1 + (r - a) * s1 - (r + b) * s13
    y3h = 1 + (r - a) * s2 - (r + b) * s23
    return Residual([[y1h * y3t * y2b, -y2t * y3h * y1b]], [y1b, y3t, y2b])


def aut_blkp(tau: Field, p, q, r, pt) -> Residual:
    c = Cube(pt)
    _, t1, t2, t3, t12, t13, t23 = _shifted(tau, c)
    return Residual([[(p - q) * t12 * t3, (q - r) * t23 * t1, (r - p) * t13 * t2]])


# ---------------------------------------------------------------------------
# recurrences on the solution data (constant a, b)


def _vector_relations(*terms) -> list:
    """Split vector-valued terms into one scalar relation per component."""
    arrs = [np.atleast_1d(np.asarray(t, dtype=np.complex128)).ravel() for t in terms]
    size = max(a.size for a in arrs)
    arrs = [np.broadcast_to(a, (size,)) for a in arrs]
    return [[complex(a[k]) for a in arrs] for k in range(size)]


def _dirs(P: LatticeParams, c: Cube):
    p, q, r = P.pqr(c.o)
    return ((p, c.t), (q, c.h), (r, c.b))


def m_dyna(F, pt) -> Residual:
    c = Cube(pt)
    st = F.state(c.o)
    rels = []
    for k, x in _dirs(F.params, c):
        sx = F.state(x)
        rels += _vector_relations(sx.M, -st.M, -(st.r @ sx.s) / k)
    return Residual(rels)


def u_dyna(F, pt, i: int, a: complex) -> Residual:
    c = Cube(pt)
    rels = []
    u_i, u_i1, u_0 = F.uvec(c.o, i, a), F.uvec(c.o, i + 1, a), F.uvec(c.o, 0, 0)
    for k, x in _dirs(F.params, c):
        rels += _vector_relations(k * F.uvec(x, i, a), -(k - a) * u_i, -u_i1,
                                  F.S(x, i, 0, a, 0) * u_0)
    return Residual(rels)


def tu_dyna(F, pt, j: int, b: complex) -> Residual:
    c = Cube(pt)
    rels = []
    tu_j = F.tuvec(c.o, j, b)
    s0j = F.S(c.o, 0, j, 0, b)
    for k, x in _dirs(F.params, c):
        rels += _vector_relations(k * tu_j, -(k + b) * F.tuvec(x, j, b), F.tuvec(x, j + 1, b),
                                  -F.tuvec(x, 0, 0) * s0j)
    return Residual(rels)


def s_dyna(F, pt, i: int, j: int, a: complex, b: complex) -> Residual:
    c = Cube(pt)
    rels = []
    S0 = F.S(c.o, i, j, a, b)
    S0_i1 = F.S(c.o, i + 1, j, a, b)
    S0_0j = F.S(c.o, 0, j, a, b)
    for k, x in _dirs(F.params, c):
        rels.append([(k + b) * F.S(x, i, j, a, b), -F.S(x, i, j + 1, a, b),
                     -(k - a) * S0, -S0_i1, F.S(x, i, 0, a, b) * S0_0j])
    return Residual(rels)


def va_dyna(F, pt, a: complex) -> Residual:
    c = Cube(pt)
    u, va = F.u(c.o), F.v_a(c.o, a)
    return Residual([[F.s_a(x, a), -(k + u) * F.v_a(x, a), (k - a) * va]
                     for k, x in _dirs(F.params, c)])


def wb_dyna(F, pt, b: complex) -> Residual:
    c = Cube(pt)
    tb, wb = F.t_b(c.o, b), F.w_b(c.o, b)
    return Residual([[tb, (k + b) * F.w_b(x, b), -(k - F.u(x)) * wb]
                     for k, x in _dirs(F.params, c)])


def sab_dyna(F, pt, a: complex, b: complex) -> Residual:
    c = Cube(pt)
    s, wb = F.s_ab(c.o, a, b), F.w_b(c.o, b)
    return Residual([[1, (k - a) * s, -(k + b) * F.s_ab(x, a, b), -F.v_a(x, a) * wb]
                     for k, x in _dirs(F.params, c)])


# ---------------------------------------------------------------------------
# Miura maps


def mu1(u: Field, va: Field, P: LatticeParams, pt, a: complex) -> Residual:
    c = Cube(pt)
    p, q, r = P.pqr(c.o)
    _, u1, u2, u3 = (u(x) for x in (c.o, c.t, c.h, c.b))
    _, v1, v2, v3, v12, v13, v23 = _shifted(va, c)
    return Residual([
        [(p - q + u2 - u1) * v12, -(p - a) * v2, (q - a) * v1],
        [(r - p + u1 - u3) * v13, -(r - a) * v1, (p - a) * v3],
        [(q - r + u3 - u2) * v23, -(q - a) * v3, (r - a) * v2],
    ], [v12, v13, v23])


def mu2(u: Field, wb: Field, P: LatticeParams, pt, b: complex) -> Residual:
    c = Cube(pt)
    p, q, r = P.pqr(c.o)
    u1, u2, u3 = u(c.t), u(c.h), u(c.b)
    w0, w1, w2, w3 = wb(c.o), wb(c.t), wb(c.h), wb(c.b)
    return Residual([
        [(p - q + u2 - u1) * w0, -(p + b) * w1, (q + b) * w2],
        [(r - p + u1 - u3) * w0, -(r + b) * w3, (p + b) * w1],
        [(q - r + u3 - u2) * w0, -(q + b) * w2, (r + b) * w3],
    ], [w0])


def u_tau(u: Field, tau: Field, P: LatticeParams, pt) -> Residual:
    c = Cube(pt)
    p, q, r = P.pqr(c.o)
    u1, u2, u3 = u(c.t), u(c.h), u(c.b)
    t0, t1, t2, t3, t12, t13, t23 = _shifted(tau, c)
    return Residual([
        [(p - q + u2 - u1) * t1 * t2, -(p - q) * t12 * t0],
        [(q - r + u3 - u2) * t3 * t2, -(q - r) * t23 * t0],
        [(r - p + u1 - u3) * t3 * t1, -(r - p) * t13 * t0],
    ], [t1, t2, t3])


def tau_vw(F, pt) -> Residual:
    """tau~/tau = w_{-p_n} = 1 / v_{p_n}(n+1), and the q, r counterparts."""
    c = Cube(pt)
    t0 = F.tau(c.o)
    rels, dens = [], [t0]
    for d, (k, x) in enumerate(_dirs(F.params, c)):
        tx = F.tau(x)
        v_shift = F.v_a(x, k)
        rels.append([tx, -t0 * F.w_b(c.o, -k)])
        rels.append([tx * v_shift, -t0])
        dens.append(v_shift)
    return Residual(rels, dens)


# ---------------------------------------------------------------------------
# Lax systems


def _lax_forward(psi: Field, P: LatticeParams, c: Cube, coeffs) -> list:
    """(pT1 - qT2)psi = c3 psi, (qT2 - rT3)psi = c1 psi, (rT3 - pT1)psi = c2 psi."""
    p, q, r = P.pqr(c.o)
    c1, c2, c3 = coeffs
    s0, s1, s2, s3 = psi(c.o), psi(c.t), psi(c.h), psi(c.b)
    return [[p * s1, -q * s2, -c3 * s0],
            [q * s2, -r * s3, -c1 * s0],
            [r * s3, -p * s1, -c2 * s0]]


def _lax_dual(chi: Field, P: LatticeParams, c: Cube, coeffs) -> list:
    """(pT2 - qT1)chi = c3 T1T2 chi and cyclic."""
    p, q, r = P.pqr(c.o)
    c1, c2, c3 = coeffs
    x1, x2, x3 = chi(c.t), chi(c.h), chi(c.b)
    return [[p * x2, -q * x1, -c3 * chi(c.th)],
            [q * x3, -r * x2, -c1 * chi(c.hb)],
            [r * x1, -p * x3, -c2 * chi(c.tb)]]


def _lax_backward(chi: Field, P: LatticeParams, c: Cube, coeffs) -> list:
    """(p_{n-1}T1^-1 - q_{m-1}T2^-1)chi = c3 chi and cyclic."""
    pm, qm, rm = P.p_at(c.o.n - 1), P.q_at(c.o.m - 1), P.r_at(c.o.h - 1)
    c1, c2, c3 = coeffs
    x0, x1, x2, x3 = chi(c.o), chi(c.dt), chi(c.dh), chi(c.db)
    return [[pm * x1, -qm * x2, -c3 * x0],
            [qm * x2, -rm * x3, -c1 * x0],
            [rm * x3, -pm * x1, -c2 * x0]]


def lax_u(psi: Field, u: Field, P: LatticeParams, pt) -> Residual:
    c = Cube(pt)
    rels = _lax_forward(psi, P, c, _phis(u, P, c.o))
    return Residual(rels + phi_sum(u, P, pt).relations)


def lax_tu(chi: Field, u: Field, P: LatticeParams, pt) -> Residual:
    c = Cube(pt)
    return Residual(_lax_dual(chi, P, c, _phis(u, P, c.o)))


def _tau_coeffs(tau: Field, P: LatticeParams, c: Cube):
    p, q, r = P.pqr(c.o)
    t0, t1, t2, t3, t12, t13, t23 = _shifted(tau, c)
    return ((q - r) * t23 * t0 / (t3 * t2),
            (r - p) * t13 * t0 / (t3 * t1),
            (p - q) * t12 * t0 / (t1 * t2)), [t1, t2, t3]


def lax_blkp_u(psi: Field, tau: Field, P: LatticeParams, pt) -> Residual:
    c = Cube(pt)
    coeffs, dens = _tau_coeffs(tau, P, c)
    return Residual(_lax_forward(psi, P, c, coeffs), dens)


def lax_blkp_tu(chi: Field, tau: Field, P: LatticeParams, pt) -> Residual:
    c = Cube(pt)
    coeffs, dens = _tau_coeffs(tau, P, c)
    return Residual(_lax_dual(chi, P, c, coeffs), dens)


def lax_v(psi: Field, v: Field, P: LatticeParams, pt) -> Residual:
    c = Cube(pt)
    p, q, r = P.pqr(c.o)
    v0, v1, v2, v3 = v(c.o), v(c.t), v(c.h), v(c.b)
    coeffs = ((q / v2 - r / v3) * v0, (r / v3 - p / v1) * v0, (p / v1 - q / v2) * v0)
    return Residual(_lax_forward(psi, P, c, coeffs), [v0, v1, v2, v3])


def lax_v_asym(psi: Field, V: Field, P: LatticeParams, pt) -> Residual:
    """Potential u^(-1)(p_{n-1})_0 / v_{p_{n-1}} with V(n,m,h) = v_{p_{n-1}}."""
    c = Cube(pt)
    _, q, r = P.pqr(c.o)
    a = P.p_at(c.o.n - 1)
    V0, V2, V3 = V(c.o), V(c.h), V(c.b)
    coeffs = (((q - a) / V2 - (r - a) / V3) * V0, (r - a) * V0 / V3, -(q - a) * V0 / V2)
    return Residual(_lax_forward(psi, P, c, coeffs), [V0, V2, V3])


def lax_w(chi: Field, w: Field, P: LatticeParams, pt) -> Residual:
    c = Cube(pt)
    pm, qm, rm = P.p_at(c.o.n - 1), P.q_at(c.o.m - 1), P.r_at(c.o.h - 1)
    w0, w1, w2, w3 = w(c.o), w(c.dt), w(c.dh), w(c.db)
    coeffs = ((qm / w2 - rm / w3) * w0, (rm / w3 - pm / w1) * w0, (pm / w1 - qm / w2) * w0)
    return Residual(_lax_backward(chi, P, c, coeffs), [w0, w1, w2, w3])


def lax_w_asym(chi: Field, W: Field, P: LatticeParams, pt) -> Residual:
    """Potential tu^(-1)(-p_n)_0 / w_{-p_n} with W(n,m,h) = w_{-p_n}."""
    c = Cube(pt)
    pn = P.p_at(c.o.n)
    qm, rm = P.q_at(c.o.m - 1), P.r_at(c.o.h - 1)
    W0, W2, W3 = W(c.o), W(c.dh), W(c.db)
    coeffs = (((qm - pn) / W2 - (rm - pn) / W3) * W0, (rm - pn) * W0 / W3, -(qm - pn) * W0 / W2)
    return Residual(_lax_backward(chi, P, c, coeffs), [W0, W2, W3])
