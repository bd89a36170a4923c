# %% [markdown]
# # Courant brackets as derived brackets
#
# A cubic Hamiltonian Ψ defines X∘Y = {{X, Ψ}, Y} on degree-1 functions.
# For Ψ = Σ ξ^i p_i this is the Dorfman bracket, under ∂_i ↦ ψ_i and
# dx^i ↦ ξ^i.

# %%
from itertools import product

from gcx import courant as co
from gcx import derived as dv
from gcx.superalgebra import GradedContext, poisson_bracket

n = 2
psi = dv.canonical_psi(n)
print(psi, dv.homological_check(psi))

gens = co.generating_set(n, 1)
agree = all(dv.derived_bracket(psi, dv.lift(a), dv.lift(b)) == dv.lift(co.dorfman(a, b))
            for a, b in product(gens, repeat=2))
print("matches Dorfman on", len(gens) ** 2, "pairs:", agree)

# %% [markdown]
# Orthogonal tensors become quadratic elements Q with N = {Q, ·}.  The
# double bracket {{Ψ, Q}, Q} equals −Ψ for a complex structure and +Ψ for a
# product structure.

# %%
ctx = dv.tangent_context(n)
omega = [[0, 0, 0, -1], [0, 0, 1, 0], [0, -1, 0, 0], [1, 0, 0, 0]]
Q = dv.n_to_quadratic(omega, ctx)
print(Q, dv.double_bracket_classify(psi, Q))
print(dv.quadratic_to_n(Q) == omega)

# %% [markdown]
# Purely odd Hamiltonians encode quadratic Lie algebras.  The cross
# product gives Ψ = −ξ¹ξ²ξ³; two overlapping triples on five generators do
# not satisfy {Ψ, Ψ} = 0.

# %%
c3 = GradedContext.identity(0, 3)
cross = dv.build_psi(dv.CubicHamiltonianData(c3, ((),) * 3, {(0, 1, 2): 1}))
print(cross, dv.homological_check(cross))

c5 = GradedContext.identity(0, 5)
bad = dv.build_psi(dv.CubicHamiltonianData(c5, ((),) * 5, {(0, 1, 2): 1, (2, 3, 4): 1}))
print(poisson_bracket(bad, bad), len(dv.jacobi_violations(bad, 0, limit=3)))
