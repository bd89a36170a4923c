# %% [markdown]
# # Nijenhuis tensors on Leibniz algebras
#
# A Leibniz algebra is stored by its structure constants c[a, b, d].  A
# (1,1)-tensor N deforms the product into X ∘_N Y; when the torsion of N
# is a cocycle the deformed product is again Leibniz.

# %%
import random

from gcx import leibniz as lb

L = lb.nilpotent_square()          # e1∘e1 = e2
N = lb.frac_array([[0, 0], [1, 0]])  # e1 ↦ e2

print(lb.jacobi_check(L))
print("torsion vanishes:", lb.is_zero(lb.torsion(L, N)))
print(lb.classify_tensor(L, N))

# %% [markdown]
# A random sweep over a non-Lie algebra.  Every weak Nijenhuis tensor yields
# a Leibniz pencil.

# %%
rng = random.Random(0)
H = lb.random_leibniz(rng, "hemisemidirect")
tally = {}
for _ in range(50):
    T = lb.random_tensor(rng, H.dim)
    rep = lb.classify_tensor(H, T)
    tally[rep.classification] = tally.get(rep.classification, 0) + 1
    if rep.cocycle:
        assert all(lb.compatibility_pencil_check(H, T, lb.random_rational(rng)) for _ in range(3))
print(tally)

# %% [markdown]
# With a metric, the point Courant axioms can be tested directly.  The
# cross-product algebra passes; e1∘e1 = e2 with the identity metric fails.

# %%
print(lb.point_courant_check(lb.cross_product()))
bad = lb.LeibnizAlgebra(L.c, lb.identity(2))
print(lb.point_courant_violations(bad)[:2])
