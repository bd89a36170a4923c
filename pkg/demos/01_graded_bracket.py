# %% [markdown]
# # Graded functions and the Poisson bracket
#
# A Darboux chart on a degree-2 symplectic N-manifold has base coordinates
# x^i, odd coordinates θ^a and momenta p_i.  Here we work in the chart of
# TR^2 + T*R^2: odd coordinates (ξ^1, ξ^2, ψ_1, ψ_2) with ξ^i paired to ψ_i.

# %%
from gcx.superalgebra import GradedContext, degree_components, partial, poisson_bracket

ctx = GradedContext.hyperbolic(2)
x1, x2, p1 = ctx.x(0), ctx.x(1), ctx.p(0)
xi1, xi2, psi1 = ctx.theta(0), ctx.theta(1), ctx.theta(2)

# %% [markdown]
# Odd coordinates anticommute and square to zero.

# %%
print(xi2 * xi1)
print((xi1 * xi1).is_zero())

# %% [markdown]
# Odd derivatives act from the left, so moving past ξ^1 costs a sign.

# %%
print(partial(xi1 * xi2, ctx.coordinate("odd", 2)))

# %% [markdown]
# The bracket lowers degree by two.  On coordinates it returns the
# canonical pairings.

# %%
print(poisson_bracket(p1, x1), poisson_bracket(xi1, psi1), poisson_bracket(xi1, xi1))

F = x2 * xi1 * p1 + xi1 * xi2 * psi1
for k, part in degree_components(F).items():
    print(k, part)
print(poisson_bracket(F, x2 * psi1))
