"""Exact rational row reduction and nullspaces.

Rows are sparse ``{column: Fraction}`` dicts because the systems produced by
the commutant computation are tall and very sparse.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Sequence

SparseRow = Mapping[int, Fraction]


class SparseEliminator:
    """Incremental exact Gaussian elimination over sparse rows.

    Rows are reduced against the current pivots as they arrive, so adding a
    dependent row costs nothing afterwards and the echelon basis stays small.
    """

    def __init__(self, ncols: int):
        self.ncols = ncols
        self.pivots: dict[int, dict[int, Fraction]] = {}  # pivot column -> normalized row

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def _reduce(self, row: dict[int, Fraction]) -> dict[int, Fraction]:
        # pivot rows vanish on every other pivot column, so one sweep suffices
        for col in [c for c in row if c in self.pivots]:
            f = row.get(col)
            if not f:
                continue
            for c, v in self.pivots[col].items():
                s = row.get(c, 0) - f * v
                if s:
                    row[c] = s
                else:
                    row.pop(c, None)
        return row

    def add_row(self, row: SparseRow) -> bool:
        """Insert a row; returns True when it raised the rank."""
        r = self._reduce({c: Fraction(v) for c, v in row.items() if v})
        if not r:
            return False
        col = min(r)
        inv = 1 / r[col]
        r = {c: v * inv for c, v in r.items()}
        # keep pivots fully reduced so nullspace read-off is direct
        for pc, prow in self.pivots.items():
            f = prow.get(col)
            if f:
                for c, v in r.items():
                    s = prow.get(c, 0) - f * v
                    if s:
                        prow[c] = s
                    else:
                        prow.pop(c, None)
        self.pivots[col] = r
        return True

    def add_rows(self, rows: Iterable[SparseRow]) -> None:
        for row in rows:
            self.add_row(row)

    def nullspace(self) -> list[list[Fraction]]:
        """Basis of ``{v : row·v = 0 for every inserted row}``, one vector per free column."""
        free = [c for c in range(self.ncols) if c not in self.pivots]
        basis = []
        for fc in free:
            v = [Fraction(0)] * self.ncols
            v[fc] = Fraction(1)
            for pc, prow in self.pivots.items():
                v[pc] = -prow.get(fc, Fraction(0))
            basis.append(v)
        return basis


def nullspace(rows: Sequence[Sequence[Fraction]], ncols: int | None = None) -> list[list[Fraction]]:
    """Nullspace of a dense rational matrix given as a list of rows."""
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    elim = SparseEliminator(ncols)
    elim.add_rows({c: v for c, v in enumerate(row) if v} for row in rows)
    return elim.nullspace()


def rank(rows: Sequence[Sequence[Fraction]]) -> int:
    if not rows:
        return 0
    elim = SparseEliminator(len(rows[0]))
    elim.add_rows({c: v for c, v in enumerate(row) if v} for row in rows)
    return elim.rank
