"""
Lifting theta series through generator rings of modular forms.

Level 1 uses C[E4, E6]; level 2 uses C[G2, E4] with G2 = 2E2(2z) - E2(z).
A theta series known to a modest depth is written as a rational combination
of generator monomials of its weight; the combination is then expanded to any
precision.  Every lift is checked against all known source coefficients, not
only those used in the solve.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .linalg import Echelon, Inconsistent, integer_row, solve
from .qseries import QSeries, eisenstein, mul

MIN_EXTRA = 5


class LiftFailed(ArithmeticError):
    pass


@lru_cache(maxsize=64)
def _generator(name: str, precision: int) -> QSeries:
    if name == "E4":
        return eisenstein(4, 1, precision)
    if name == "E6":
        return eisenstein(6, 1, precision)
    if name == "G2":
        return eisenstein(2, 2, precision).scale(2) - eisenstein(2, 1, precision)
    raise KeyError(name)


@dataclass(frozen=True)
class GeneratorRing:
    level: int
    names: tuple[str, str]
    weights: tuple[int, int]

    def generator(self, i: int, precision: int) -> QSeries:
        return _generator(self.names[i], precision)

    def exponents(self, k: int) -> list[tuple[int, int]]:
        """All (a, b) with a*w0 + b*w1 = k, a descending."""
        w0, w1 = self.weights
        if k < 0 or k % 2:
            return []
        out = []
        for a in range(k // w0, -1, -1):
            rest = k - a * w0
            if rest % w1 == 0:
                out.append((a, rest // w1))
        return out


RINGS = {
    1: GeneratorRing(1, ("E4", "E6"), (4, 6)),
    2: GeneratorRing(2, ("G2", "E4"), (2, 4)),
}


def generator_ring(level: int) -> GeneratorRing:
    try:
        return RINGS[level]
    except KeyError:
        raise ValueError(f"no certified generator ring for level {level}") from None


@lru_cache(maxsize=256)
def _power(name: str, e: int, precision: int) -> QSeries:
    if e == 0:
        return QSeries.one(precision)
    half = _power(name, e // 2, precision)
    sq = mul(half, half)
    return mul(sq, _generator(name, precision)) if e % 2 else sq


@lru_cache(maxsize=256)
def monomial_series(level: int, exps: tuple[int, int], precision: int) -> QSeries:
    ring = generator_ring(level)
    a, b = exps
    return mul(_power(ring.names[0], a, precision), _power(ring.names[1], b, precision))


def monomial_basis(level: int, k: int, precision: int) -> list[tuple[tuple[int, int], QSeries]]:
    """[(exponents, series)] for every generator monomial of weight k."""
    ring = generator_ring(level)
    return [(e, monomial_series(level, e, precision)) for e in ring.exponents(k)]


@dataclass(frozen=True)
class LiftedForm:
    level: int
    weight: int
    monomials: tuple
    coeffs: tuple                  # Fractions
    fitted_depth: int
    verified_up_to: int
    extended: QSeries

    def to_json(self) -> dict:
        return {"level": self.level, "weight": self.weight,
                "monomials": [list(e) for e in self.monomials],
                "coeffs": [str(c) for c in self.coeffs], "fittedDepth": self.fitted_depth}

    def dumps(self) -> str:
        return json.dumps(self.to_json())

    @classmethod
    def from_json(cls, data, precision: int) -> "LiftedForm":
        if isinstance(data, str):
            data = json.loads(data)
        mons = tuple(tuple(e) for e in data["monomials"])
        coeffs = tuple(Fraction(c) for c in data["coeffs"])
        ext = combine(data["level"], mons, coeffs, precision)
        return cls(data["level"], data["weight"], mons, coeffs, data["fittedDepth"], -1, ext)


def combine(level: int, monomials: Sequence, coeffs: Sequence, precision: int) -> QSeries:
    out = [Fraction(0)] * precision
    for e, c in zip(monomials, coeffs):
        if c:
            s = monomial_series(level, tuple(e), precision)
            for i in range(precision):
                out[i] += c * s[i]
    return QSeries(0, tuple(int(v) if v.denominator == 1 else v for v in out))


def least_fit_depth(level: int, k: int) -> int:
    """Smallest D such that the weight-k monomials are independent on q^0..q^(D-1)."""
    mons = monomial_basis(level, k, 4 * k + 8)
    n = len(mons)
    if n == 0:
        return 0
    ech = Echelon()
    for D in range(1, 4 * k + 9):
        ech.add(integer_row([s[D - 1] for _, s in mons]))
        if ech.rank == n:
            return D
    raise LiftFailed(f"weight {k} monomials are dependent")


def fit_and_extend(source: Sequence, level: int, weight: int, target_precision: int) -> LiftedForm:
    """Express the coefficient list `source` (q^0, q^1, ...) in the weight-k ring and extend.

    Raises LiftFailed when there is no exact fit, when fewer than MIN_EXTRA
    source coefficients lie beyond the solve depth, or when any known
    coefficient disagrees with the fitted form.
    """
    if hasattr(source, "series"):        # ThetaSeries
        source = list(source.series.coeffs)
    source = [Fraction(c) for c in source]
    if weight % 2:
        raise LiftFailed(f"odd weight {weight} has no level-{level} lift")
    ring = generator_ring(level)
    exps = ring.exponents(weight)
    if not exps:
        if any(source):
            raise LiftFailed(f"no weight-{weight} forms at level {level} but source is nonzero")
        return LiftedForm(level, weight, (), (), 0, len(source) - 1, QSeries(0, (0,) * target_precision))
    depth = least_fit_depth(level, weight)
    if len(source) < depth + MIN_EXTRA:
        raise LiftFailed(f"lift failed: need {depth + MIN_EXTRA} source coefficients, have {len(source)}")
    prec = max(target_precision, len(source))
    basis = [monomial_series(level, e, prec) for e in exps]
    A = [[s[i] for s in basis] for i in range(depth)]
    try:
        coeffs = solve(A, source[:depth])
    except Inconsistent:
        raise LiftFailed("lift failed: no representation fits") from None
    ext = combine(level, exps, coeffs, prec)
    for i, c in enumerate(source):
        if ext[i] != c:
            raise LiftFailed(f"lift failed: coefficient {i} is {c}, fitted form gives {ext[i]}")
    return LiftedForm(level, weight, tuple(exps), tuple(coeffs), depth, len(source) - 1,
                      ext.truncate(target_precision))
