# %% [markdown]
# # Asymmetric modified equations
#
# The v and w variables are evaluated with a point-dependent parameter: V uses
# the previous p, W the negated current p.  Both are resolved at each lattice
# point, including the shifted points of a stencil.

# %%
from ndkp import BlockSpec, Fields, LatticeParams, Selector, SpectralConfig, Verifier

P = LatticeParams(base=(0, 0, 0), window=((0, 3), (0, 3), (0, 3)),
                  p=[2, 2.5, 3, 3.5], q=[4.25, 4.5, 4.75, 5.25], r=[5.5, 6, 6.5, 7])
F = Fields(P, SpectralConfig([BlockSpec.diagonal([1, 2])], [BlockSpec.diagonal([8, 9])]))
V = Verifier(F)

# %%
pt = (2, 1, 1)
print("V(pt) = v_a at a =", Selector("PrevP").resolve(pt, P), "->", F.v_a(pt, Selector("PrevP")))
print("W(pt) = w_b at b =", Selector("NegP").resolve(pt, P), "->", F.w_b(pt, Selector("NegP")))

# %%
for c in ["ASYM_V_P", "ASYM_V_Q", "ASYM_V_R", "ASYM_W_P", "ASYM_W_Q", "ASYM_W_R"]:
    print(V.run(c).line())
