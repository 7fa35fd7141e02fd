"""
Exact linear algebra over Q with sparse integer rows.

Rows are dicts {column: int}.  Elimination is fraction-free: a row update
a*row - b*pivot is followed by division by the row content, so entries stay
integral and small.  The pivot rows are kept fully reduced, which makes
nullspace and particular solutions direct reads.
"""

from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import gcd, lcm
from typing import Iterable, Sequence


def _content(row: dict) -> int:
    g = 0
    for v in row.values():
        g = gcd(g, v)
        if g == 1:
            break
    return g


def _normalise(row: dict) -> dict:
    g = _content(row)
    if g > 1:
        row = {k: v // g for k, v in row.items()}
    return row


def integer_row(values: Iterable) -> dict:
    """Dense or (col, value) rational input -> primitive sparse integer row."""
    if isinstance(values, dict):
        items = values.items()
    else:
        items = enumerate(values)
    items = [(c, Fraction(v)) for c, v in items if v]
    if not items:
        return {}
    den = reduce(lcm, (v.denominator for _, v in items), 1)
    return _normalise({c: int(v * den) for c, v in items})


def _axpy(row: dict, prow: dict, col: int) -> dict:
    """Eliminate `col` from `row` using pivot row `prow`."""
    a = prow[col]
    b = row[col]
    g = gcd(a, b)
    a //= g
    b //= g
    out = {k: a * v for k, v in row.items()} if a != 1 else dict(row)
    for k, v in prow.items():
        nv = out.get(k, 0) - b * v
        if nv:
            out[k] = nv
        else:
            out.pop(k, None)
    return _normalise(out)


class Echelon:
    """Incrementally maintained reduced row echelon form."""

    def __init__(self):
        self.pivots: dict[int, dict] = {}

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def reduce(self, row: dict) -> dict:
        for col in [c for c in row if c in self.pivots]:
            if col in row:
                row = _axpy(row, self.pivots[col], col)
        return row

    def add(self, row: dict) -> int | None:
        """Insert a row; returns the new pivot column or None if dependent."""
        row = self.reduce(integer_row(row) if not _is_int_row(row) else row)
        if not row:
            return None
        col = min(row)
        if row[col] < 0:
            row = {k: -v for k, v in row.items()}
        for c, prow in list(self.pivots.items()):
            if col in prow:
                self.pivots[c] = _axpy(prow, row, col)
        self.pivots[col] = row
        return col


def _is_int_row(row) -> bool:
    return isinstance(row, dict) and all(type(v) is int for v in row.values())


def echelon(rows: Iterable) -> Echelon:
    ech = Echelon()
    for r in rows:
        ech.add(integer_row(r))
    return ech


def rank(rows: Iterable) -> int:
    return echelon(rows).rank


def nullspace(rows: Iterable, ncols: int) -> list[list[int]]:
    """Integer basis of {v : A v = 0}, one vector per free column."""
    ech = echelon(rows)
    free = [c for c in range(ncols) if c not in ech.pivots]
    basis = []
    for f in free:
        vec = {f: Fraction(1)}
        for c, prow in ech.pivots.items():
            if f in prow:
                vec[c] = Fraction(-prow[f], prow[c])
        den = reduce(lcm, (v.denominator for v in vec.values()), 1)
        dense = [0] * ncols
        for c, v in vec.items():
            dense[c] = int(v * den)
        g = reduce(gcd, dense, 0)
        basis.append([x // g for x in dense])
    return basis


class Inconsistent(ValueError):
    pass


def solve(A: Sequence[Sequence], b: Sequence) -> list[Fraction]:
    """One exact solution of A x = b (free variables set to zero)."""
    ncols = len(A[0]) if A else 0
    rows = []
    for ai, bi in zip(A, b):
        r = {c: v for c, v in enumerate(ai) if v}
        if bi:
            r[ncols] = bi
        rows.append(r)
    ech = echelon(rows)
    if ncols in ech.pivots:
        raise Inconsistent("linear system has no solution")
    x = [Fraction(0)] * ncols
    for c, prow in ech.pivots.items():
        x[c] = Fraction(prow.get(ncols, 0), prow[c])
    return x


def independent_subset(vectors: Sequence[Sequence]) -> list[int]:
    """Indices of a maximal linearly independent prefix-greedy subset."""
    ech = Echelon()
    keep = []
    for i, v in enumerate(vectors):
        if ech.add(integer_row(v)) is not None:
            keep.append(i)
    return keep
