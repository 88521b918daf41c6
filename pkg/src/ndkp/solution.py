"""Exact solutions of the canonical determining equation set.

The data are block-structured: Gamma (N x N) and Lambda (N' x N') are
direct sums of diagonal groups and lower Jordan blocks.  Plane-wave
factors are carried as jets in their eigenvalue so that Jordan blocks
get the parameter derivatives they need, and the Sylvester solution is
assembled in closed form as M = F G H.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np

from . import numkit
from .errors import SingularConfiguration, SingularMatrix, SylvesterResidualTooLarge
from .lattice import LatticeParams, LatticePoint
from .numkit import Jet, jet_recip, lift_affine

SYLVESTER_RTOL = 1e-11


@dataclass(frozen=True)
class BlockSpec:
    """One diagonal group of distinct eigenvalues or one Jordan block."""

    kind: str
    values: tuple[complex, ...]
    amplitudes: tuple[complex, ...]
    size: int = 1

    def __post_init__(self):
        kind = self.kind.lower()
        if kind not in ("diagonal", "jordan"):
            raise SingularConfiguration(f"unknown block kind {self.kind!r}")
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "values", tuple(complex(v) for v in self.values))
        object.__setattr__(self, "amplitudes", tuple(complex(a) for a in self.amplitudes))
        if kind == "diagonal":
            if len(set(self.values)) != len(self.values):
                raise SingularConfiguration(f"diagonal eigenvalues must be distinct: {self.values}")
            if len(self.amplitudes) != len(self.values):
                raise SingularConfiguration("one amplitude per diagonal eigenvalue is required")
            object.__setattr__(self, "size", len(self.values))
        else:
            if len(self.values) != 1 or len(self.amplitudes) != 1:
                raise SingularConfiguration("a Jordan block has one eigenvalue and one amplitude")
            if self.size < 1:
                raise SingularConfiguration(f"Jordan block size must be >= 1, got {self.size}")
        if self.size < 1:
            raise SingularConfiguration("empty block")
        if any(v == 0 for v in self.values):
            raise SingularConfiguration(f"zero eigenvalue in block {self.values}")

    @classmethod
    def diagonal(cls, values, amplitudes=None) -> "BlockSpec":
        values = tuple(values)
        if amplitudes is None:
            amplitudes = (1,) * len(values)
        return cls("diagonal", values, tuple(amplitudes))

    @classmethod
    def jordan(cls, value, size: int, amplitude=1) -> "BlockSpec":
        return cls("jordan", (value,), (amplitude,), size)

    @property
    def dim(self) -> int:
        return self.size


@dataclass(frozen=True)
class SpectralConfig:
    """Block spectral data for Gamma, Lambda and the coupling matrix C."""

    k_blocks: tuple[BlockSpec, ...]
    kappa_blocks: tuple[BlockSpec, ...]
    C: object = "identity"

    def __post_init__(self):
        object.__setattr__(self, "k_blocks", tuple(self.k_blocks))
        object.__setattr__(self, "kappa_blocks", tuple(self.kappa_blocks))
        if not self.k_blocks or not self.kappa_blocks:
            raise SingularConfiguration("both k_blocks and kappa_blocks must be non-empty")
        if isinstance(self.C, str):
            if self.C != "identity":
                raise SingularConfiguration(f"C must be a matrix or 'identity', got {self.C!r}")
            if self.N != self.Nprime:
                raise SingularConfiguration(
                    f"C = identity needs N == N', got N={self.N}, N'={self.Nprime}")
            c = np.eye(self.N, dtype=np.complex128)
        else:
            c = numkit.as_cmatrix(self.C, "C")
            if c.shape != (self.Nprime, self.N):
                raise SingularConfiguration(f"C must be N'xN = {self.Nprime}x{self.N}, got {c.shape}")
        c.setflags(write=False)
        object.__setattr__(self, "C", c)
        for k in self.k_values():
            for kap in self.kappa_values():
                if k + kap == 0:
                    raise SingularConfiguration(
                        f"k + kappa = 0 for k={k}, kappa={kap}: E(Gamma) meets E(-Lambda)")

    @property
    def N(self) -> int:
        return sum(b.dim for b in self.k_blocks)

    @property
    def Nprime(self) -> int:
        return sum(b.dim for b in self.kappa_blocks)

    @property
    def jet_order(self) -> int:
        return max(self.N, self.Nprime) - 1

    def k_values(self) -> list[complex]:
        return [v for b in self.k_blocks for v in b.values]

    def kappa_values(self) -> list[complex]:
        return [v for b in self.kappa_blocks for v in b.values]

    @cached_property
    def gamma_lambda(self) -> tuple[np.ndarray, np.ndarray]:
        return build_gamma_lambda(self)

    @cached_property
    def G(self) -> np.ndarray:
        return build_G(self)


def _block_matrix(blocks: Sequence[BlockSpec]) -> np.ndarray:
    n = sum(b.dim for b in blocks)
    out = np.zeros((n, n), dtype=np.complex128)
    off = 0
    for b in blocks:
        if b.kind == "diagonal":
            for i, v in enumerate(b.values):
                out[off + i, off + i] = v
        else:
            for i in range(b.size):
                out[off + i, off + i] = b.values[0]
                if i:
                    out[off + i, off + i - 1] = 1
        off += b.dim
    return out


def build_gamma_lambda(spec: SpectralConfig) -> tuple[np.ndarray, np.ndarray]:
    """Block-diagonal canonical matrices; Jordan blocks carry 1 on the subdiagonal."""
    return _block_matrix(spec.k_blocks), _block_matrix(spec.kappa_blocks)


def plane_wave(params: LatticeParams, point, eigenvalue, amplitude, side: str, order: int) -> Jet:
    """Discrete exponential as a jet in its eigenvalue.

    Column side: amplitude * prod (1 + k/p_i)(1 + k/q_j)(1 + k/r_l).
    Row side:    amplitude * prod (1 - k/p_i)^-1 (...)^-1 (...)^-1.
    """
    if side not in ("column", "row"):
        raise ValueError(f"side must be 'column' or 'row', got {side!r}")
    k0 = complex(eigenvalue)
    sgn = 1 if side == "column" else -1
    acc = Jet.constant(amplitude, order)
    for d in range(3):
        lin = lambda i, d=d: lift_affine(1, sgn / params.param(d, i), k0, order)
        if side == "column":
            fwd, bwd = lin, (lambda i, lin=lin: jet_recip(lin(i)))
        else:
            fwd, bwd = (lambda i, lin=lin: jet_recip(lin(i))), lin
        acc = acc * _jet_range_product(fwd, bwd, params.base[d], point[d], order)
    return acc


def _jet_range_product(fwd, bwd, start: int, stop: int, order: int) -> Jet:
    acc = Jet.constant(1, order)
    if stop >= start:
        for i in range(start, stop):
            acc = acc * fwd(i)
    else:
        for i in range(stop, start):
            acc = acc * bwd(i)
    return acc


def _block_jets(params, point, blocks, side, order) -> list[list[Jet]]:
    return [[plane_wave(params, point, v, a, side, order) for v, a in zip(b.values, b.amplitudes)]
            for b in blocks]


def build_r_s(params: LatticeParams, point, spec: SpectralConfig):
    """Plane-wave vectors r (N x 1) and s (1 x N') at ``point``.

    Returns ``(r, s, rho_jets, varrho_jets)``.  A Jordan block contributes
    its jet coefficients (c_0, ..., c_{size-1}) to r and the reversed
    sequence to s.
    """
    order = spec.jet_order
    rho = _block_jets(params, point, spec.k_blocks, "column", order)
    varrho = _block_jets(params, point, spec.kappa_blocks, "row", order)
    r = np.concatenate([_r_part(b, jets) for b, jets in zip(spec.k_blocks, rho)]).reshape(-1, 1)
    s = np.concatenate([_s_part(b, jets) for b, jets in zip(spec.kappa_blocks, varrho)]).reshape(1, -1)
    return r, s, rho, varrho


def _r_part(block: BlockSpec, jets: list[Jet]) -> np.ndarray:
    if block.kind == "diagonal":
        return np.array([j[0] for j in jets], dtype=np.complex128)
    return jets[0].coeffs[: block.size].copy()


def _s_part(block: BlockSpec, jets: list[Jet]) -> np.ndarray:
    if block.kind == "diagonal":
        return np.array([j[0] for j in jets], dtype=np.complex128)
    return jets[0].coeffs[: block.size][::-1].copy()


def binomial_table(n: int) -> np.ndarray:
    """Pascal triangle ``B[j, i] = C(j, i)`` built by additive recursion."""
    table = np.zeros((n + 1, n + 1))
    for j in range(n + 1):
        table[j, 0] = 1.0
        for i in range(1, j + 1):
            table[j, i] = table[j - 1, i - 1] + table[j - 1, i]
    return table


def _g_block(kb: BlockSpec, lb: BlockSpec, binom: np.ndarray) -> np.ndarray:
    out = np.zeros((kb.dim, lb.dim), dtype=np.complex128)
    if kb.kind == "diagonal" and lb.kind == "diagonal":
        for i, k in enumerate(kb.values):
            for j, kap in enumerate(lb.values):
                out[i, j] = 1 / (k + kap)
    elif kb.kind == "diagonal":
        d = lb.values[0]
        for i, k in enumerate(kb.values):
            for j in range(1, lb.dim + 1):
                out[i, j - 1] = -((-1 / (k + d)) ** j)
    elif lb.kind == "diagonal":
        c = kb.values[0]
        for i in range(1, kb.dim + 1):
            for j, kap in enumerate(lb.values):
                out[i - 1, j] = -((-1 / (c + kap)) ** i)
    else:
        c, d = kb.values[0], lb.values[0]
        for i in range(1, kb.dim + 1):
            for j in range(1, lb.dim + 1):
                out[i - 1, j - 1] = binom[i + j - 2, i - 1] * (-1) ** (i + j) / (c + d) ** (i + j - 1)
    return out


def build_G(spec: SpectralConfig) -> np.ndarray:
    """Constant middle factor of M = F G H."""
    binom = binomial_table(spec.N + spec.Nprime)
    rows = [np.hstack([_g_block(kb, lb, binom) for lb in spec.kappa_blocks]) for kb in spec.k_blocks]
    G = np.vstack(rows)
    G.setflags(write=False)
    return G


def lower_toeplitz(coeffs, size: int) -> np.ndarray:
    out = np.zeros((size, size), dtype=np.complex128)
    for a in range(size):
        for b in range(a + 1):
            out[a, b] = coeffs[a - b]
    return out


def skew_toeplitz(coeffs, size: int) -> np.ndarray:
    out = np.zeros((size, size), dtype=np.complex128)
    for a in range(size):
        for b in range(size - a):
            out[a, b] = coeffs[size - 1 - a - b]
    return out


def _block_diag(parts: list[np.ndarray]) -> np.ndarray:
    n = sum(p.shape[0] for p in parts)
    out = np.zeros((n, n), dtype=np.complex128)
    off = 0
    for p in parts:
        k = p.shape[0]
        out[off:off + k, off:off + k] = p
        off += k
    return out


@dataclass(frozen=True)
class SolutionState:
    point: LatticePoint
    F: np.ndarray
    G: np.ndarray
    H: np.ndarray
    M: np.ndarray
    r: np.ndarray
    s: np.ndarray
    rho_jets: list = field(repr=False)
    varrho_jets: list = field(repr=False)


def sylvester_residual(gamma, lam, M, r, s) -> float:
    """Relative residual of Gamma M + M Lambda = r s."""
    rs = r @ s
    res = gamma @ M + M @ lam - rs
    return float(np.linalg.norm(res) / max(1.0, np.linalg.norm(rs)))


def build_M(params: LatticeParams, point, spec: SpectralConfig, check: bool = True) -> SolutionState:
    """Closed-form Sylvester solution M = F G H at ``point``."""
    point = LatticePoint(*point)
    r, s, rho, varrho = build_r_s(params, point, spec)
    F_parts, H_parts = [], []
    for b, jets in zip(spec.k_blocks, rho):
        if b.kind == "diagonal":
            F_parts.append(np.diag([j[0] for j in jets]).astype(np.complex128))
        else:
            F_parts.append(lower_toeplitz(jets[0].coeffs, b.size))
    for b, jets in zip(spec.kappa_blocks, varrho):
        if b.kind == "diagonal":
            H_parts.append(np.diag([j[0] for j in jets]).astype(np.complex128))
        else:
            H_parts.append(skew_toeplitz(jets[0].coeffs, b.size))
    F = _block_diag(F_parts)
    H = _block_diag(H_parts)
    G = spec.G
    M = F @ G @ H
    if check:
        gamma, lam = spec.gamma_lambda
        res = sylvester_residual(gamma, lam, M, r, s)
        if not res <= SYLVESTER_RTOL:
            raise SylvesterResidualTooLarge(f"Sylvester residual {res:.3e} at {tuple(point)}")
    return SolutionState(point=point, F=F, G=G, H=H, M=M, r=r, s=s,
                         rho_jets=rho, varrho_jets=varrho)


def sylvester_oracle(gamma, lam, r, s) -> np.ndarray:
    """Solve Gamma M + M Lambda = r s by Kronecker vectorisation.

    Uses the column-major identity vec(A X B) = (B^T kron A) vec(X).
    """
    gamma = numkit.as_cmatrix(gamma)
    lam = numkit.as_cmatrix(lam)
    n, n2 = gamma.shape[0], lam.shape[0]
    big = np.kron(np.eye(n2), gamma) + np.kron(lam.T, np.eye(n))
    rhs = (np.asarray(r) @ np.asarray(s)).reshape(-1, order="F").reshape(-1, 1)
    factors = numkit.lu_factor(big)
    if factors.singular:
        raise SingularMatrix("Sylvester operator is singular: spectra of Gamma and -Lambda meet")
    return factors.solve(rhs).reshape(n, n2, order="F")


@dataclass(frozen=True)
class DESystem:
    """Pointwise determining-equation data (K, L, M, C, r, s)."""

    K: np.ndarray
    L: np.ndarray
    M: np.ndarray
    C: np.ndarray
    r: np.ndarray
    s: np.ndarray

    @classmethod
    def from_state(cls, state: SolutionState, spec: SpectralConfig) -> "DESystem":
        gamma, lam = spec.gamma_lambda
        return cls(K=gamma, L=lam, M=state.M, C=spec.C, r=state.r, s=state.s)


def similarity_transform(system: DESystem, T1, T2) -> DESystem:
    """Conjugate the data by invertible T1 (N x N) and T2 (N' x N')."""
    f1 = numkit.lu_factor(T1)
    f2 = numkit.lu_factor(T2)
    if f1.singular or f2.singular:
        raise SingularMatrix("similarity transform matrices must be invertible")
    T1 = numkit.as_cmatrix(T1)
    T2 = numkit.as_cmatrix(T2)
    # X T^{-1} is the left solve of y T = X
    return DESystem(
        K=f1.solve_left(T1 @ system.K),
        L=f2.solve_left(T2 @ system.L),
        M=f2.solve_left(T1 @ system.M),
        C=f1.solve_left(T2 @ system.C),
        r=T1 @ system.r,
        s=f2.solve_left(system.s),
    )

