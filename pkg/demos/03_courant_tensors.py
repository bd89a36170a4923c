# %% [markdown]
# # The standard Courant algebroid on R^n
#
# Sections X + ξ have polynomial coefficients.  Identities are checked
# exactly on basis sections times monomials of bounded degree.

# %%
from gcx import courant as co
from gcx.poly import Poly

S = co.PolySection
n = 2
x2 = Poly.var(n, 1)

print(co.dorfman(S.d(n, 0, x2), S.d(n, 1)))    # (x²∂₁)∘∂₂
print(co.dorfman(S.d(n, 0, x2), S.dx(n, 0)))   # (x²∂₁)∘dx¹
a = S.d(n, 0) + S.dx(n, 0, x2)
print(co.dorfman(a, a))
print(len(co.axiom_violations(n)), len(co.jacobi_violations(n)))

# %% [markdown]
# Generalized complex, product and tangent structures.

# %%
N_omega = co.symplectic_structure([[0, -1], [1, 0]])
P = co.GenEndomorphism.blocks(n, A=[[1, 0], [0, 1]], D=[[-1, 0], [0, -1]])
for name, N in [("N_omega", N_omega), ("diag(I,-I)", P), ("zero", co.GenEndomorphism.zero(n))]:
    r = co.classify_courant_tensor(N)
    print(name, r.kind, r.lam, r.gamma)

# %% [markdown]
# Irreducibility: tensors commuting with the bracket are scalar.  Left
# multiplication by vector fields alone leaves two block scalars; adding the
# square rule leaves only the identity.

# %%
res = co.commutant_solve(1, coeff_degree=1)
print(res.stage1_dimension, res.stage1_full_dimension, res.stage2_dimension)
print(res.stage2[0])
