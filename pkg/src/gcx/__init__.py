"""Exact symbolic checks for Courant algebroids, Leibniz algebras and Nijenhuis tensors.

Submodules:

``superalgebra``  graded polynomials and the degree -2 Poisson bracket
``leibniz``       finite-dimensional Leibniz algebras and constant tensors
``courant``       the Dorfman bracket on polynomial sections of TR^n + T*R^n
``derived``       cubic Hamiltonians, derived brackets and quadratic elements
``cli``           the ``gcx`` command line front end
"""

from .poly import Poly, as_fraction
from .superalgebra import GradedContext, SuperPolynomial, partial, poisson_bracket
from .leibniz import LeibnizAlgebra
from .courant import GenEndomorphism, PolySection, dorfman
from .derived import CubicHamiltonianData, build_psi, derived_bracket

__all__ = [
    "Poly", "as_fraction", "GradedContext", "SuperPolynomial", "partial", "poisson_bracket",
    "LeibnizAlgebra", "GenEndomorphism", "PolySection", "dorfman",
    "CubicHamiltonianData", "build_psi", "derived_bracket",
]
__version__ = "0.1.0"
