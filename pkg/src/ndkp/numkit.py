"""Dense complex linear algebra and truncated Taylor (jet) arithmetic.

Matrices are plain ``numpy`` complex arrays.  The LU routines are written
out by hand so that the singularity threshold is explicit: a pivot is
rejected when its magnitude falls below ``PIVOT_RTOL`` times the largest
row norm of the input.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NonFiniteValue, ReciprocalAtZero, SingularMatrix

PIVOT_RTOL = 1e-14


def as_cmatrix(a, name: str = "matrix") -> np.ndarray:
    """Return ``a`` as a finite 2-D complex128 array."""
    arr = np.array(a, dtype=np.complex128)
    if arr.ndim == 0:
        arr = arr.reshape(1, 1)
    elif arr.ndim == 1:
        arr = arr.reshape(-1, 1)
    if arr.ndim != 2:
        raise ValueError(f"{name} must be 2-D, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise NonFiniteValue(f"{name} contains NaN or infinite entries")
    return arr


@dataclass(frozen=True)
class LUFactors:
    """Packed LU factors of a square matrix with row pivoting.

    ``lu`` holds the unit lower factor below the diagonal and the upper
    factor on and above it; ``perm[i]`` is the original row now in row i.
    """

    lu: np.ndarray
    perm: np.ndarray
    sign: int
    singular: bool

    @property
    def n(self) -> int:
        return self.lu.shape[0]

    def det(self) -> complex:
        return complex(self.sign * np.prod(np.diag(self.lu)))

    def solve(self, b) -> np.ndarray:
        """Solve ``A x = b`` for a vector or a block of right-hand sides."""
        if self.singular:
            raise SingularMatrix("matrix is singular to working precision")
        b = np.asarray(b, dtype=np.complex128)
        vec = b.ndim == 1
        x = b.reshape(self.n, -1)[self.perm].copy()
        lu = self.lu
        for i in range(1, self.n):
            x[i] -= lu[i, :i] @ x[:i]
        for i in range(self.n - 1, -1, -1):
            x[i] = (x[i] - lu[i, i + 1:] @ x[i + 1:]) / lu[i, i]
        return x.ravel() if vec else x

    def solve_left(self, b) -> np.ndarray:
        """Solve ``x A = b`` for a row vector or a block of rows."""
        if self.singular:
            raise SingularMatrix("matrix is singular to working precision")
        b = np.asarray(b, dtype=np.complex128)
        vec = b.ndim == 1
        # x A = b  <=>  A^T x^T = b^T, with A^T = U^T L^T P
        y = b.reshape(-1, self.n).T.copy()
        lu = self.lu
        for i in range(self.n):
            y[i] = (y[i] - lu[:i, i] @ y[:i]) / lu[i, i]
        for i in range(self.n - 2, -1, -1):
            y[i] -= lu[i + 1:, i] @ y[i + 1:]
        x = np.empty_like(y)
        x[self.perm] = y
        return x.T.ravel() if vec else x.T


def lu_factor(a) -> LUFactors:
    """Gaussian elimination with partial pivoting.

    Never raises on singular input; the ``singular`` flag is set instead
    so that :func:`determinant` can still report a (near-)zero value.
    """
    a = as_cmatrix(a)
    n, m = a.shape
    if n != m:
        raise ValueError(f"square matrix required, got {a.shape}")
    lu = a.copy()
    perm = np.arange(n)
    sign = 1
    scale = float(np.max(np.sum(np.abs(a), axis=1))) if n else 0.0
    threshold = PIVOT_RTOL * scale
    singular = scale == 0.0
    for k in range(n):
        p = k + int(np.argmax(np.abs(lu[k:, k])))
        if p != k:
            lu[[k, p]] = lu[[p, k]]
            perm[[k, p]] = perm[[p, k]]
            sign = -sign
        piv = lu[k, k]
        if abs(piv) <= threshold:
            singular = True
            if piv == 0:
                continue
        lu[k + 1:, k] /= piv
        lu[k + 1:, k + 1:] -= np.outer(lu[k + 1:, k], lu[k, k + 1:])
    return LUFactors(lu=lu, perm=perm, sign=sign, singular=singular)


def lu_solve(a, b) -> np.ndarray:
    """Solve ``A X = B``; ``a`` may be a matrix or precomputed factors."""
    factors = a if isinstance(a, LUFactors) else lu_factor(a)
    b = as_cmatrix(b, "right-hand side")
    if b.shape[0] != factors.n:
        raise ValueError(f"row mismatch: A is {factors.n}x{factors.n}, B has {b.shape[0]} rows")
    return factors.solve(b)


def determinant(a) -> complex:
    return lu_factor(a).det()


def inverse(a) -> np.ndarray:
    factors = a if isinstance(a, LUFactors) else lu_factor(a)
    return factors.solve(np.eye(factors.n, dtype=np.complex128))


# ---------------------------------------------------------------------------
# Jets: Taylor coefficients c_l = f^(l)(k0) / l! truncated at a fixed order.


class Jet:
    """Truncated Taylor series in one spectral parameter."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        c = np.array(coeffs, dtype=np.complex128).ravel()
        if c.size == 0:
            raise ValueError("a jet needs at least one coefficient")
        if not np.all(np.isfinite(c)):
            raise NonFiniteValue("jet coefficients must be finite")
        self.coeffs = c

    @property
    def order(self) -> int:
        return self.coeffs.size - 1

    @classmethod
    def constant(cls, value, order: int) -> "Jet":
        c = np.zeros(order + 1, dtype=np.complex128)
        c[0] = value
        return cls(c)

    def __mul__(self, other):
        if isinstance(other, Jet):
            return jet_mul(self, other)
        return Jet(self.coeffs * other)

    __rmul__ = __mul__

    def recip(self) -> "Jet":
        return jet_recip(self)

    def __getitem__(self, l: int) -> complex:
        return complex(self.coeffs[l])

    def __repr__(self) -> str:
        return f"Jet({self.coeffs.tolist()})"


def lift_affine(alpha, beta, k0, order: int) -> Jet:
    """Jet of ``alpha + beta*k`` expanded at ``k = k0``."""
    c = np.zeros(order + 1, dtype=np.complex128)
    c[0] = alpha + beta * k0
    if order >= 1:
        c[1] = beta
    return Jet(c)


def jet_mul(x: Jet, y: Jet) -> Jet:
    if x.order != y.order:
        raise ValueError(f"jet orders differ: {x.order} vs {y.order}")
    return Jet(np.convolve(x.coeffs, y.coeffs)[: x.order + 1])


def jet_recip(x: Jet) -> Jet:
    c = x.coeffs
    if abs(c[0]) <= 1e-14:
        raise ReciprocalAtZero(f"leading coefficient {complex(c[0])} too small to invert")
    out = np.zeros_like(c)
    out[0] = 1.0 / c[0]
    for l in range(1, c.size):
        out[l] = -(c[1 : l + 1] @ out[l - 1 :: -1][:l]) / c[0]
    return Jet(out)
