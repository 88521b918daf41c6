# %% [markdown]
# # One-soliton fixture with constant lattice parameters
#
# k = 1, kappa = 4, p = 2, q = 3, r = 5 and C = 1.  Here M is a scalar, so the
# closed form can be compared with exact rational arithmetic.

# %%
from fractions import Fraction as Fr

from ndkp import BlockSpec, Fields, LatticeParams, SpectralConfig

P = LatticeParams.constant(2, 3, 5, window=((0, 3), (0, 3), (0, 3)))
S = SpectralConfig([BlockSpec.diagonal([1])], [BlockSpec.diagonal([4])])
F = Fields(P, S)


def exact_M(n, m, h):
    rho = Fr(3, 2) ** n * Fr(4, 3) ** m * Fr(6, 5) ** h
    varrho = Fr(-1) ** -n * Fr(-1, 3) ** -m * Fr(1, 5) ** -h
    return rho * varrho / 5


# %%
for pt in [(0, 0, 0), (1, 0, 0), (0, 1, 2), (3, 3, 3)]:
    tau = F.tau(pt)
    exact = 1 + exact_M(*pt)
    print(pt, "tau =", tau, " exact =", float(exact), " diff =", abs(tau - float(exact)))

# %% [markdown]
# The shifted tau ratio equals w at the negated first parameter.

# %%
print("tau(1,0,0)/tau(0,0,0) =", F.tau((1, 0, 0)) / F.tau((0, 0, 0)))
print("w_(-2)(0,0,0)         =", F.w_b((0, 0, 0), -2))
print("7/12                  =", 7 / 12)
