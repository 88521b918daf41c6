"""Solution classes and lattice data shared by the test modules."""

from fractions import Fraction as Fr

from ndkp import BlockSpec, DeformConstants, Fields, LatticeParams, SpectralConfig

D, J = BlockSpec.diagonal, BlockSpec.jordan

# kappa sits above every sequence value so the plane waves stay well scaled
CLASSES = {
    "soliton1": lambda: SpectralConfig([D([1])], [D([8])]),
    "soliton2": lambda: SpectralConfig([D([1, 2])], [D([8, 9])]),
    "jordan2": lambda: SpectralConfig([J(1, 2)], [J(8, 2)]),
    "jordan3": lambda: SpectralConfig([J(1, 3)], [J(9, 3)]),
    "mixed": lambda: SpectralConfig([D([1]), J(2, 2)], [D([8]), J(9, 2)]),
}

SEQ4 = dict(p=[2, 2.5, 3, 3.5], q=[3, 10 / 3, 11 / 3, 4], r=[5, 5.5, 6, 6.5])
SEQ5 = dict(p=[2, 2.5, 3, 3.5, 4], q=[3, 10 / 3, 11 / 3, 4, 13 / 3], r=[5, 5.5, 6, 6.5, 7.5])
# no p_i = q_j style coincidences, so every transformation factor is nonzero
SEQ4_DISTINCT = dict(p=[2, 2.5, 3, 3.5], q=[4.25, 4.5, 4.75, 5.25], r=[5.5, 6, 6.5, 7])

CONSTANTS = DeformConstants(x0=0.3, y0=2, yp0=1.5, xi0=0.7, eta0=1.3, zp0=0.9, sigma0=1.1, z0=0.2)


def window(size, base=(0, 0, 0)):
    return tuple((0, size - 1) for _ in range(3))


def params4(seqs=SEQ4):
    return LatticeParams(base=(0, 0, 0), window=window(4), **seqs)


def params5():
    return LatticeParams(base=(0, 0, 0), window=window(5), **SEQ5)


def e1_params(size=4, base=(0, 0, 0)):
    return LatticeParams.constant(2, 3, 5, window=window(size), base=base)


def e1_spectral():
    return SpectralConfig([D([1])], [D([4])])


def e1_fields(size=4, **kw):
    return Fields(e1_params(size), e1_spectral(), **kw)


def fields(name, params=None, constants=None):
    return Fields(params or params4(), CLASSES[name](), constants)


# exact scalar closed form for E1: k = 1, kappa = 4, p = 2, q = 3, r = 5, C = 1

def e1_M(n, m, h):
    k, kap = Fr(1), Fr(4)
    rho = (1 + k / 2) ** n * (1 + k / 3) ** m * (1 + k / 5) ** h
    varrho = (1 - kap / 2) ** -n * (1 - kap / 3) ** -m * (1 - kap / 5) ** -h
    return rho * varrho / (k + kap)


def e1_S(n, m, h, i=0, j=0, a=0, b=0):
    """S^(i,j)(a,b) = (k+kappa) M (a+k)^i (b+kappa)^j / (1+M)."""
    M = e1_M(n, m, h)
    return 5 * M * (Fr(a) + 1) ** i * (Fr(b) + 4) ** j / (1 + M)


def e1_tau(n, m, h):
    return 1 + e1_M(n, m, h)
