"""Courant-algebroid identities for an abstract bracket, pairing and anchor.

Both the Dorfman bracket on sections and the derived bracket on degree-1
functions are checked with the same code.  Elements only need ``+``, ``-``
and equality; ``anchor(X, f)`` must return the same type as ``pairing``.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Callable, Sequence, TypeVar

E = TypeVar("E")


@dataclass(frozen=True)
class Witness:
    identity: str
    args: tuple
    defect: object

    def to_json(self, render=str) -> dict:
        return {"identity": self.identity, "args": [render(a) for a in self.args],
                "defect": render(self.defect)}


def _is_zero(v) -> bool:
    return v.is_zero() if hasattr(v, "is_zero") else v == 0


def axiom_violations(gens: Sequence[E], bracket: Callable, pairing: Callable,
                     anchor: Callable, limit: int | None = None) -> list[Witness]:
    """Polarized axioms on all triples of ``gens``.

    ``symmetric-part``: ρ(X)⟨Y,Z⟩ = ⟨X, Y∘Z + Z∘Y⟩
    ``invariance``:     ρ(X)⟨Y,Z⟩ = ⟨X∘Y, Z⟩ + ⟨Y, X∘Z⟩

    The pairing is checked for symmetry on the generators first and then
    evaluated once per (product, generator) pair.
    """
    k = len(gens)
    out: list[Witness] = []
    pairs = {}
    for i in range(k):
        for j in range(i, k):
            pairs[(i, j)] = pairing(gens[i], gens[j])
            if j > i:
                other = pairing(gens[j], gens[i])
                if not _is_zero(pairs[(i, j)] - other):
                    out.append(Witness("pairing-symmetry", (gens[i], gens[j]), pairs[(i, j)] - other))
                pairs[(j, i)] = pairs[(i, j)]
    if out:
        return out
    prods = {(i, j): bracket(gens[i], gens[j]) for i in range(k) for j in range(k)}
    # against[(y, z), x] = ⟨Y∘Z, X⟩ = ⟨X, Y∘Z⟩
    against = {(yz, x): pairing(prods[yz], gens[x]) for yz in prods for x in range(k)}
    rho = {}
    for x, y, z in product(range(k), repeat=3):
        key = (x, min(y, z), max(y, z))
        if key not in rho:
            rho[key] = anchor(gens[x], pairs[(y, z)])
        lhs = rho[key]
        sym = lhs - against[((y, z), x)] - against[((z, y), x)]
        if not _is_zero(sym):
            out.append(Witness("symmetric-part", (gens[x], gens[y], gens[z]), sym))
        inv = lhs - against[((x, y), z)] - against[((x, z), y)]
        if not _is_zero(inv):
            out.append(Witness("invariance", (gens[x], gens[y], gens[z]), inv))
        if limit is not None and len(out) >= limit:
            break
    return out


def jacobi_violations(gens: Sequence[E], bracket: Callable,
                      limit: int | None = None) -> list[Witness]:
    """``(X∘Y)∘Z = X∘(Y∘Z) − Y∘(X∘Z)`` on all triples."""
    k = len(gens)
    prods = {(i, j): bracket(gens[i], gens[j]) for i in range(k) for j in range(k)}
    out: list[Witness] = []
    for x, y, z in product(range(k), repeat=3):
        d = (bracket(prods[(x, y)], gens[z]) - bracket(gens[x], prods[(y, z)])
             + bracket(gens[y], prods[(x, z)]))
        if not _is_zero(d):
            out.append(Witness("jacobi", (gens[x], gens[y], gens[z]), d))
            if limit is not None and len(out) >= limit:
                break
    return out


def anchor_rule_violations(gens: Sequence[E], functions: Sequence, bracket: Callable,
                           anchor: Callable, mul: Callable) -> list[Witness]:
    """``X∘(fY) = f(X∘Y) + ρ(X)(f) Y`` with ``mul(f, Y)`` the module action."""
    out: list[Witness] = []
    for X, Y in product(gens, repeat=2):
        XY = bracket(X, Y)
        for f in functions:
            d = bracket(X, mul(f, Y)) - mul(f, XY) - mul(anchor(X, f), Y)
            if not _is_zero(d):
                out.append(Witness("anchor-rule", (X, Y, f), d))
    return out
