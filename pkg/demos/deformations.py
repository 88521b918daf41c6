# %% [markdown]
# # Deformed variables and the autonomous reductions
#
# The deformed variables carry integration constants.  With constant p, q, r
# the deformations become power laws and the autonomous list applies.

# %%
from ndkp import BlockSpec, DeformConstants, Fields, LatticeParams, SpectralConfig, Verifier

spec = SpectralConfig([BlockSpec.jordan(1, 2)], [BlockSpec.jordan(8, 2)])
consts = DeformConstants(x0=0.3, y0=2, yp0=1.5, xi0=0.7, eta0=1.3, zp0=0.9, sigma0=1.1, z0=0.2)

varying = LatticeParams(base=(0, 0, 0), window=((0, 3), (0, 3), (0, 3)),
                        p=[2, 2.5, 3, 3.5], q=[4.25, 4.5, 4.75, 5.25], r=[5.5, 6, 6.5, 7])
V = Verifier(Fields(varying, spec, consts))
for c in ["DEF_X", "DEF_Y", "DEF_YP", "DEF_XI", "DEF_ETA", "DEF_ZP(1/3,1/7)", "DEF_SIGMA"]:
    print(V.run(c).line())

# %%
constant = LatticeParams.constant(2, 3, 5, window=((0, 3), (0, 3), (0, 3)))
V = Verifier(Fields(constant, spec, consts), 1e-12)
for c in ["AUT_LPKP", "AUT_LPMKP_I", "AUT_LPMKP_II", "AUT_ASYM_I", "AUT_ASYM_II",
          "AUT_NQC(1/3,1/7)", "AUT_BLKP", "AUT_DEF_SIGMA"]:
    print(V.run(c).line())

# %% [markdown]
# Autonomous checks refuse non-constant sequences.

# %%
r = Verifier(Fields(varying, spec, consts)).run("AUT_LPKP")
print(r.status, r.error)
