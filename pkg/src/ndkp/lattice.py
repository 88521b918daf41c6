"""Lattice points, non-autonomous parameter sequences and range products.

Products and sums run from the base index up to (but excluding) the
current index.  Below the base they extend backwards: factors are
inverted and terms negated, so ``range_product(f, a, c) ==
range_product(f, a, b) * range_product(f, b, c)`` for any a, b, c.
Accumulation is always in ascending index order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, NamedTuple, Sequence

from .errors import (
    IndexOutOfWindow,
    SingularConfiguration,
    ZeroFactorInInverseRange,
)

DIRECTIONS = ("n", "m", "h")
SEQUENCES = ("p", "q", "r")


class LatticePoint(NamedTuple):
    n: int
    m: int
    h: int

    def shift(self, dn: int = 0, dm: int = 0, dh: int = 0) -> "LatticePoint":
        return LatticePoint(self.n + dn, self.m + dm, self.h + dh)

    def __add__(self, other):  # type: ignore[override]
        return LatticePoint(self.n + other[0], self.m + other[1], self.h + other[2])


E1 = (1, 0, 0)
E2 = (0, 1, 0)
E3 = (0, 0, 1)
UNIT = (E1, E2, E3)


def signed_range(base: int, stop: int) -> tuple[range, int]:
    """Index range and sign for a sum/product from ``base`` to ``stop``."""
    if stop >= base:
        return range(base, stop), 1
    return range(stop, base), -1


def range_product(factor: Callable[[int], complex], start: int, stop: int,
                  inverse: Callable[[int], complex] | None = None) -> complex:
    """Product of ``factor(i)`` for ``start <= i < stop``.

    For ``stop < start`` returns the product of ``1/factor(i)`` over
    ``stop <= i < start``; ``inverse`` may supply those reciprocals
    directly when they are cheaper or better conditioned.
    """
    idx, sign = signed_range(start, stop)
    acc = 1 + 0j
    if sign > 0:
        for i in idx:
            acc *= factor(i)
        return acc
    for i in idx:
        if inverse is not None:
            acc *= inverse(i)
            continue
        f = factor(i)
        if f == 0:
            raise ZeroFactorInInverseRange(f"factor vanishes at index {i} in a backward range")
        acc /= f
    return acc


def range_sum(term: Callable[[int], complex], start: int, stop: int) -> complex:
    """Sum of ``term(i)`` for ``start <= i < stop``, negated when reversed."""
    idx, sign = signed_range(start, stop)
    acc = 0j
    for i in idx:
        acc += term(i)
    return sign * acc


@dataclass(frozen=True)
class LatticeParams:
    """Parameter sequences p_n, q_m, r_h on an explicit finite window.

    ``window`` holds inclusive ``(lo, hi)`` ranges for n, m, h; each
    sequence is stored from its window's ``lo`` upwards.
    """

    base: LatticePoint
    window: tuple[tuple[int, int], tuple[int, int], tuple[int, int]]
    p: tuple[complex, ...]
    q: tuple[complex, ...]
    r: tuple[complex, ...]

    def __post_init__(self):
        object.__setattr__(self, "base", LatticePoint(*self.base))
        object.__setattr__(self, "window", tuple((int(lo), int(hi)) for lo, hi in self.window))
        for name, (lo, hi), seq, b in zip(SEQUENCES, self.window, self.seqs, self.base):
            if hi < lo:
                raise SingularConfiguration(f"empty window for {name}: [{lo}, {hi}]")
            if len(seq) != hi - lo + 1:
                raise SingularConfiguration(
                    f"sequence {name} has {len(seq)} entries, window [{lo}, {hi}] needs {hi - lo + 1}")
            if not lo <= b <= hi:
                raise SingularConfiguration(f"base index {b} outside {name}-window [{lo}, {hi}]")
        for name, seq in zip(SEQUENCES, self.seqs):
            object.__setattr__(self, name, tuple(complex(x) for x in seq))

    @classmethod
    def constant(cls, p, q, r, window=((0, 3), (0, 3), (0, 3)), base=(0, 0, 0)) -> "LatticeParams":
        sizes = [hi - lo + 1 for lo, hi in window]
        return cls(base=LatticePoint(*base), window=window,
                   p=(p,) * sizes[0], q=(q,) * sizes[1], r=(r,) * sizes[2])

    @property
    def seqs(self) -> tuple[Sequence[complex], Sequence[complex], Sequence[complex]]:
        return (self.p, self.q, self.r)

    def param(self, direction: int, index: int) -> complex:
        lo, hi = self.window[direction]
        if not lo <= index <= hi:
            raise IndexOutOfWindow(
                f"{SEQUENCES[direction]}_{index} requested outside window [{lo}, {hi}]")
        return self.seqs[direction][index - lo]

    def p_at(self, n: int) -> complex:
        return self.param(0, n)

    def q_at(self, m: int) -> complex:
        return self.param(1, m)

    def r_at(self, h: int) -> complex:
        return self.param(2, h)

    def pqr(self, point) -> tuple[complex, complex, complex]:
        return self.param(0, point[0]), self.param(1, point[1]), self.param(2, point[2])

    def contains(self, point) -> bool:
        return all(lo <= x <= hi for x, (lo, hi) in zip(point, self.window))

    def points(self) -> Iterator[LatticePoint]:
        """All window points in lexicographic (n, m, h) order."""
        (n0, n1), (m0, m1), (h0, h1) = self.window
        for n in range(n0, n1 + 1):
            for m in range(m0, m1 + 1):
                for h in range(h0, h1 + 1):
                    yield LatticePoint(n, m, h)

    def is_constant(self) -> bool:
        return all(len(set(seq)) == 1 for seq in self.seqs)

    def constants(self) -> tuple[complex, complex, complex]:
        return self.p[0], self.q[0], self.r[0]

    def plane_indices(self, direction: int) -> range:
        """Indices a plane-wave product can touch for points in the window."""
        lo, hi = self.window[direction]
        return range(lo, hi)

    def dir_product(self, direction: int, point, factor: Callable[[complex], complex]) -> complex:
        """Product of ``factor(param_i)`` from the base index to ``point``."""
        seq = lambda i: factor(self.param(direction, i))
        return range_product(seq, self.base[direction], point[direction])

    def dir_sum(self, direction: int, point, term: Callable[[complex], complex]) -> complex:
        seq = lambda i: term(self.param(direction, i))
        return range_sum(seq, self.base[direction], point[direction])


@dataclass(frozen=True)
class Selector:
    """A parameter value that may depend on the evaluation point.

    ``Selector.const(c)`` is the fixed number c; the other kinds pick a
    neighbouring lattice parameter: ``PrevP`` is p_{n-1}, ``NegP`` is -p_n
    and analogously for q and r.
    """

    kind: str
    value: complex = 0j

    KINDS = ("Constant", "PrevP", "PrevQ", "PrevR", "NegP", "NegQ", "NegR")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise ValueError(f"unknown selector kind {self.kind!r}")
        object.__setattr__(self, "value", complex(self.value))

    @classmethod
    def const(cls, c) -> "Selector":
        return cls("Constant", c)

    @property
    def is_constant(self) -> bool:
        return self.kind == "Constant"

    def offset(self) -> tuple[int, int, int]:
        """Lattice offset whose parameter this selector reads."""
        if self.kind.startswith("Prev"):
            d = "PQR".index(self.kind[-1])
            return tuple(-1 if k == d else 0 for k in range(3))
        return (0, 0, 0)

    def resolve(self, point, params: LatticeParams) -> complex:
        if self.kind == "Constant":
            return self.value
        d = "PQR".index(self.kind[-1])
        if self.kind.startswith("Prev"):
            return params.param(d, point[d] - 1)
        return -params.param(d, point[d])

    def __str__(self) -> str:
        if self.kind == "Constant":
            return _fmt_complex(self.value)
        return self.kind


def _fmt_complex(c: complex) -> str:
    if c.imag == 0:
        return repr(c.real)
    sign = "-" if c.imag < 0 else "+"
    return f"{c.real!r}{sign}{abs(c.imag)!r}j"


def resolve_selector(sel, point, params: LatticeParams) -> complex:
    if isinstance(sel, Selector):
        return sel.resolve(point, params)
    return complex(sel)


def as_selector(a) -> Selector:
    return a if isinstance(a, Selector) else Selector.const(a)


def validate_params(params: LatticeParams, spectral=None, extra_a: Iterable[complex] = (),
                    extra_b: Iterable[complex] = ()) -> None:
    """Raise :class:`SingularConfiguration` unless every needed inverse exists.

    Checked: lattice parameters nonzero; p_i != -k and p_i != kappa for every
    index a plane-wave product can reach; k != 0, kappa != 0, k + kappa != 0;
    a != -k for shift parameters a and b != -kappa for shift parameters b.
    """
    for d, seq_name in enumerate(SEQUENCES):
        lo, hi = params.window[d]
        for i in range(lo, hi + 1):
            if params.param(d, i) == 0:
                raise SingularConfiguration(f"{seq_name}_{i} = 0 (lattice parameter must be nonzero)")
    if spectral is None:
        return
    ks = spectral.k_values()
    kappas = spectral.kappa_values()
    for k in ks:
        if k == 0:
            raise SingularConfiguration("k = 0: K is not invertible, S^(-1,.) undefined")
    for kap in kappas:
        if kap == 0:
            raise SingularConfiguration("kappa = 0: L is not invertible, S^(.,-1) undefined")
    for k in ks:
        for kap in kappas:
            if k + kap == 0:
                raise SingularConfiguration(
                    f"k + kappa = 0 for k={k}, kappa={kap}: spectra of K and -L intersect")
    for d, seq_name in enumerate(SEQUENCES):
        for i in params.plane_indices(d):
            s = params.param(d, i)
            for k in ks:
                if s + k == 0:
                    raise SingularConfiguration(
                        f"{seq_name}_{i} = -k = {s}: {seq_name}_{i} I + K is not invertible")
            for kap in kappas:
                if s - kap == 0:
                    raise SingularConfiguration(
                        f"{seq_name}_{i} = kappa = {s}: {seq_name}_{i} I - L is not invertible")
    for a in extra_a:
        for k in ks:
            if a + k == 0:
                raise SingularConfiguration(f"a = -k = {a}: aI + K is not invertible")
    for b in extra_b:
        for kap in kappas:
            if b + kap == 0:
                raise SingularConfiguration(f"b = -kappa = {b}: bI + L is not invertible")
