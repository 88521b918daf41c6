# %% [markdown]
# # Solution classes and the equation residual sweep
#
# Diagonal spectra give multi-solitons, Jordan blocks give their degenerate
# limits.  Every class is checked against the lattice equations on a window
# with non-constant p, q, r.

# %%
from ndkp import BlockSpec, Fields, LatticeParams, SpectralConfig, Verifier

D, J = BlockSpec.diagonal, BlockSpec.jordan
P = LatticeParams(base=(0, 0, 0), window=((0, 3), (0, 3), (0, 3)),
                  p=[2, 2.5, 3, 3.5], q=[4.25, 4.5, 4.75, 5.25], r=[5.5, 6, 6.5, 7])

classes = {
    "soliton1": SpectralConfig([D([1])], [D([8])]),
    "soliton2": SpectralConfig([D([1, 2])], [D([8, 9])]),
    "jordan2": SpectralConfig([J(1, 2)], [J(8, 2)]),
    "jordan3": SpectralConfig([J(1, 3)], [J(9, 3)]),
    "mixed": SpectralConfig([D([1]), J(2, 2)], [D([8]), J(9, 2)]),
}
checks = ["LPKP", "LPKP_RATIO", "LPMKP_V", "LPMKP_W", "NQC(1/3,1/7)", "LSKP", "BLKP"]

# %%
for name, spec in classes.items():
    V = Verifier(Fields(P, spec))
    worst = max(V.run(c).max_residual for c in checks)
    print(f"{name:9s} worst normalized residual {worst:.2e}")

# %% [markdown]
# A single report in detail.

# %%
r = Verifier(Fields(P, classes["jordan2"])).run("LPKP")
print(r.line())
print(r.summary())
