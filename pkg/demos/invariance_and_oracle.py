# %% [markdown]
# # Invariance under similarity and the Kronecker oracle
#
# Changing the spectral basis by random T1, T2 leaves S and tau unchanged.
# Independently, M is recomputed at each point by solving the Sylvester
# equation as a Kronecker linear system.

# %%
from ndkp import BlockSpec, Fields, LatticeParams, SpectralConfig, invariance_check, oracle_deviation

P = LatticeParams(base=(0, 0, 0), window=((0, 3), (0, 3), (0, 3)),
                  p=[2, 2.5, 3, 3.5], q=[3, 10 / 3, 11 / 3, 4], r=[5, 5.5, 6, 6.5])
F = Fields(P, SpectralConfig([BlockSpec.diagonal([1]), BlockSpec.jordan(2, 2)],
                             [BlockSpec.diagonal([8]), BlockSpec.jordan(9, 2)]))

# %%
for seed in range(3):
    res = invariance_check(seed, F, n_samples=10)
    print(f"seed {seed}: max relative deviation {res.max_deviation:.2e} after {res.attempts} draw(s)")

# %%
dev, sylv, worst = oracle_deviation(F)
print(f"oracle deviation {dev:.2e}, Sylvester residual {sylv:.2e}, worst point {worst}")
