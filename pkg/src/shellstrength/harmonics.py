"""
Homogeneous polynomials with exact rational coefficients, the Laplacian,
harmonic bases, harmonic projection and evaluation at lattice points.

Two representations of harmonic polynomials are used:

* `Polynomial`: explicit sparse terms.  Fine while the monomial space is
  small (a few thousand monomials).
* `ZonalHarmonic`: the harmonic component of <x, y>^l for a fixed axis y.
  Its value depends only on <x, y>, <x, x> and <y, y>, so sums over a shell
  need nothing but the distribution of inner products with y.  This is what
  makes degree 30+ harmonics in eight variables tractable.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb, prod
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import linalg


class HarmonicCapExceeded(ValueError):
    """The monomial space is too large to build an explicit basis."""


@lru_cache(maxsize=None)
def monomials(d: int, degree: int) -> tuple[tuple[int, ...], ...]:
    """Exponent vectors of total degree `degree`, lexicographically descending."""
    if degree < 0:
        return ()
    if d == 1:
        return ((degree,),)
    out = []
    for first in range(degree, -1, -1):
        for rest in monomials(d - 1, degree - first):
            out.append((first,) + rest)
    return tuple(out)


@dataclass(frozen=True)
class Polynomial:
    dim: int
    degree: int
    terms: Mapping[tuple[int, ...], Fraction] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for exps, c in dict(self.terms).items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != self.dim:
                raise ValueError(f"exponent {exps} has wrong length for dim {self.dim}")
            if sum(exps) != self.degree:
                raise ValueError(f"term {exps} is not of degree {self.degree}")
            c = Fraction(c)
            if c:
                clean[exps] = clean.get(exps, 0) + c
        clean = {k: v for k, v in sorted(clean.items(), reverse=True) if v}
        object.__setattr__(self, "terms", clean)

    @classmethod
    def monomial(cls, exps: Sequence[int], coeff=1) -> "Polynomial":
        return cls(len(exps), sum(exps), {tuple(exps): coeff})

    @classmethod
    def zero(cls, dim: int, degree: int) -> "Polynomial":
        return cls(dim, degree, {})

    @classmethod
    def radial(cls, dim: int, power: int = 1) -> "Polynomial":
        """(x_1^2 + ... + x_d^2)^power."""
        r2 = cls(dim, 2, {tuple(2 if i == j else 0 for i in range(dim)): 1 for j in range(dim)})
        out = cls(dim, 0, {(0,) * dim: 1})
        for _ in range(power):
            out = out * r2
        return out

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.dim == other.dim and (self.is_zero() and other.is_zero() or
                                          (self.degree == other.degree and self.terms == other.terms))

    __hash__ = None

    def _check(self, other):
        if self.dim != other.dim:
            raise ValueError("dimension mismatch")
        if self.degree != other.degree and not (self.is_zero() or other.is_zero()):
            raise ValueError("degree mismatch (polynomials are homogeneous)")

    def __add__(self, other: "Polynomial") -> "Polynomial":
        self._check(other)
        deg = other.degree if self.is_zero() else self.degree
        terms = dict(self.terms)
        for k, v in other.terms.items():
            terms[k] = terms.get(k, 0) + v
        return Polynomial(self.dim, deg, terms)

    def __neg__(self):
        return Polynomial(self.dim, self.degree, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "Polynomial":
        c = Fraction(c)
        return Polynomial(self.dim, self.degree, {k: c * v for k, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, Polynomial):
            if self.dim != other.dim:
                raise ValueError("dimension mismatch")
            out: dict = {}
            for ka, va in self.terms.items():
                for kb, vb in other.terms.items():
                    k = tuple(a + b for a, b in zip(ka, kb))
                    out[k] = out.get(k, 0) + va * vb
            return Polynomial(self.dim, self.degree + other.degree, out)
        return self.scale(other)

    __rmul__ = scale

    def derivative(self, i: int) -> "Polynomial":
        out = {}
        for k, v in self.terms.items():
            if k[i]:
                kk = list(k)
                kk[i] -= 1
                out[tuple(kk)] = v * k[i]
        return Polynomial(self.dim, max(self.degree - 1, 0), out)

    def __call__(self, x: Sequence) -> Fraction:
        total = Fraction(0)
        for k, v in self.terms.items():
            total += v * prod(Fraction(xi) ** e for xi, e in zip(x, k))
        return total

    def permute(self, perm: Sequence[int], signs: Sequence[int] | None = None) -> "Polynomial":
        """P o sigma, where sigma(x)_i = signs[i] * x[perm[i]]."""
        signs = signs or [1] * self.dim
        out = {}
        for k, v in self.terms.items():
            newk = [0] * self.dim
            sign = 1
            for i, e in enumerate(k):
                newk[perm[i]] += e
                if signs[i] < 0 and e % 2:
                    sign = -sign
            out[tuple(newk)] = out.get(tuple(newk), 0) + sign * v
        return Polynomial(self.dim, self.degree, out)

    def coefficient_vector(self) -> list[Fraction]:
        return [self.terms.get(m, Fraction(0)) for m in monomials(self.dim, self.degree)]

    def to_json(self) -> list[dict]:
        return [{"exponents": list(k), "num": str(v.numerator), "den": str(v.denominator)}
                for k, v in self.terms.items()]

    @classmethod
    def from_json(cls, data) -> "Polynomial":
        if isinstance(data, str):
            data = json.loads(data)
        if not data:
            raise ValueError("empty polynomial JSON carries no dimension")
        terms = {tuple(t["exponents"]): Fraction(int(t["num"]), int(t["den"])) for t in data}
        k = next(iter(terms))
        return cls(len(k), sum(k), terms)


def laplacian(P: Polynomial) -> Polynomial:
    out: dict = {}
    for k, v in P.terms.items():
        for i, e in enumerate(k):
            if e >= 2:
                kk = list(k)
                kk[i] -= 2
                kk = tuple(kk)
                out[kk] = out.get(kk, 0) + v * e * (e - 1)
    return Polynomial(P.dim, max(P.degree - 2, 0), out)


def harm_dim(d: int, degree: int) -> int:
    if d < 1 or degree < 0:
        raise ValueError("need d >= 1 and degree >= 0")
    lower = comb(d + degree - 3, degree - 2) if degree >= 2 else 0
    return comb(d + degree - 1, degree) - lower


@dataclass(frozen=True)
class HarmonicBasis:
    dim: int
    degree: int
    polys: tuple
    certified_dim: int

    def __len__(self):
        return len(self.polys)

    def __iter__(self):
        return iter(self.polys)


DEFAULT_CAP = 3000


def harmonic_basis(d: int, degree: int, cap: int = DEFAULT_CAP) -> HarmonicBasis:
    """Exact basis of Harm_degree(R^d) as the kernel of the Laplacian."""
    cols = monomials(d, degree)
    if len(cols) > cap:
        raise HarmonicCapExceeded(
            f"monomial space of size {len(cols)} exceeds cap {cap}; "
            "use random_harmonic or zonal harmonics instead")
    index = {m: i for i, m in enumerate(cols)}
    rows = []
    for beta in monomials(d, degree - 2):
        row = {}
        for j in range(d):
            m = list(beta)
            m[j] += 2
            row[index[tuple(m)]] = (beta[j] + 2) * (beta[j] + 1)
        rows.append(row)
    kernel = linalg.nullspace(rows, len(cols))
    polys = tuple(Polynomial(d, degree, {cols[i]: c for i, c in enumerate(v) if c}) for v in kernel)
    return HarmonicBasis(d, degree, polys, harm_dim(d, degree))


def harmonic_project(f: Polynomial) -> Polynomial:
    """Harmonic part P0 of f = P0 + r^2 P1 + r^4 P2 + ...

    Uses the ansatz P0 = sum_j a_j r^(2j) Lap^j f with a_0 = 1 and solves
    Lap(P0) = 0 for the a_j exactly.
    """
    d, l = f.dim, f.degree
    if f.is_zero() or l < 2:
        return f
    lap_powers = [f]
    for _ in range(l // 2):
        lap_powers.append(laplacian(lap_powers[-1]))
    candidates = [Polynomial.radial(d, j) * g for j, g in enumerate(lap_powers)]
    images = [laplacian(c) for c in candidates]
    mons = monomials(d, l - 2)
    # sum_{j>=1} a_j Lap(Q_j) = -Lap(Q_0)
    A = [[images[j].terms.get(m, 0) for j in range(1, len(images))] for m in mons]
    b = [-images[0].terms.get(m, 0) for m in mons]
    keep = [i for i, row in enumerate(A) if any(row) or b[i]]
    a = linalg.solve([A[i] for i in keep], [b[i] for i in keep]) if keep else []
    out = candidates[0]
    for aj, c in zip(a, candidates[1:]):
        if aj:
            out = out + c.scale(aj)
    if not laplacian(out).is_zero():
        raise ArithmeticError("harmonic projection failed its Laplacian check")
    return out


def random_polynomial(d: int, degree: int, rng: random.Random, nterms: int = 3) -> Polynomial:
    mons = monomials(d, degree)
    terms = {}
    for _ in range(nterms):
        c = rng.choice([-5, -4, -3, -2, -1, 1, 2, 3, 4, 5])
        terms[rng.choice(mons)] = c
    return Polynomial(d, degree, terms)


def random_harmonic(d: int, degree: int, seed: int, nterms: int = 3) -> Polynomial:
    """Harmonic projection of a random sparse integer polynomial (deterministic per seed)."""
    if degree < 1:
        raise ValueError("degree must be at least 1")
    while True:
        P = harmonic_project(random_polynomial(d, degree, random.Random(seed), nterms))
        if not P.is_zero():
            return P
        seed += 1


def evaluate(P: Polynomial, point, scale_denom: int = 1) -> Fraction:
    """P(coords / scale_denom) for a ShellPoint-like object or a coordinate sequence."""
    coords = getattr(point, "coords", point)
    if len(coords) != P.dim:
        raise ValueError(f"point of dimension {len(coords)} for polynomial in {P.dim} variables")
    total = 0
    for k, v in P.terms.items():
        total += v * prod(int(c) ** e for c, e in zip(coords, k))
    return Fraction(total) / scale_denom ** P.degree


# ---------------------------------------------------------------------------
# vectorised sums over point arrays


def _safe_int64(points: np.ndarray, degree: int) -> bool:
    if len(points) == 0:
        return True
    top = int(np.abs(points).max()) if points.size else 0
    return (top ** degree) * len(points) < 2 ** 62


def monomial_sums(points: np.ndarray, exponents: Iterable[Sequence[int]]) -> dict:
    """{alpha: sum_x x^alpha} over the rows of an integer array, exactly."""
    exponents = [tuple(e) for e in exponents]
    out = {}
    if not exponents:
        return out
    points = np.asarray(points)
    npts = len(points)
    degree = max(sum(e) for e in exponents)
    use64 = _safe_int64(points, degree)
    cache = {}

    def power(i, e):
        key = (i, e)
        if key not in cache:
            col = points[:, i].astype(np.int64 if use64 else object)
            cache[key] = col ** e if e else np.ones(npts, dtype=np.int64 if use64 else object)
        return cache[key]

    for alpha in exponents:
        if npts == 0:
            out[alpha] = 0
            continue
        acc = None
        for i, e in enumerate(alpha):
            if e:
                acc = power(i, e) if acc is None else acc * power(i, e)
        out[alpha] = npts if acc is None else int(acc.sum())
    return out


def polynomial_sum(P: Polynomial, points: np.ndarray, scale_denom: int = 1) -> Fraction:
    """sum over rows x of P(x / scale_denom)."""
    if P.is_zero():
        return Fraction(0)
    sums = monomial_sums(points, P.terms.keys())
    total = sum((v * sums[k] for k, v in P.terms.items()), Fraction(0))
    return total / scale_denom ** P.degree


def polynomial_sums(polys: Sequence[Polynomial], points: np.ndarray, scale_denom: int = 1) -> list[Fraction]:
    """Like polynomial_sum for many polynomials, sharing the monomial sums."""
    keys = set()
    for P in polys:
        keys.update(P.terms)
    sums = monomial_sums(points, keys)
    out = []
    for P in polys:
        total = sum((v * sums[k] for k, v in P.terms.items()), Fraction(0))
        out.append(total / scale_denom ** P.degree if not P.is_zero() else Fraction(0))
    return out


# ---------------------------------------------------------------------------
# zonal harmonics


@lru_cache(maxsize=None)
def zonal_coefficients(d: int, degree: int) -> tuple[Fraction, ...]:
    """a_j with sum_j a_j t^(l-2j) (|x|^2 |y|^2)^j harmonic in x, a_0 = 1."""
    a = [Fraction(1)]
    l = degree
    j = 0
    while l - 2 * j >= 2:
        num = (l - 2 * j) * (l - 2 * j - 1)
        den = 2 * (j + 1) * (2 * l - 2 * j + d - 4)
        a.append(-a[-1] * num / den)
        j += 1
    return tuple(a)


@dataclass(frozen=True)
class ZonalHarmonic:
    """x -> sum_j a_j <x,y>^(l-2j) (<x,x><y,y>)^j for a fixed axis y.

    `axis` is given in the same coordinates as the lattice points it will be
    paired with; inner products are supplied by the caller, so Gram-model
    lattices work unchanged.
    """

    dim: int
    degree: int
    axis: tuple

    @property
    def coefficients(self):
        return zonal_coefficients(self.dim, self.degree)

    def value(self, t, xx, yy) -> Fraction:
        """Value at a point x with <x,y> = t, <x,x> = xx, given <y,y> = yy."""
        l = self.degree
        return sum((a * Fraction(t) ** (l - 2 * j) * (Fraction(xx) * yy) ** j
                    for j, a in enumerate(self.coefficients)), Fraction(0))

    def shell_sum(self, power_sums: Sequence, xx, yy) -> Fraction:
        """sum over a shell of constant norm xx, given power_sums[k] = sum_x <x,y>^k."""
        l = self.degree
        return sum((a * power_sums[l - 2 * j] * (Fraction(xx) * yy) ** j
                    for j, a in enumerate(self.coefficients)), Fraction(0))

    def to_polynomial(self) -> Polynomial:
        """Explicit expansion in orthonormal coordinates (small cases only)."""
        d, l = self.dim, self.degree
        y = [Fraction(v) for v in self.axis]
        yy = sum(v * v for v in y)
        lin = Polynomial(d, 1, {tuple(1 if i == k else 0 for i in range(d)): y[k] for k in range(d)})
        out = Polynomial.zero(d, l)
        for j, a in enumerate(self.coefficients):
            term = Polynomial(d, 0, {(0,) * d: a * yy ** j})
            for _ in range(l - 2 * j):
                term = term * lin
            term = term * Polynomial.radial(d, j)
            out = out + term
        return out


def power_sums(values: np.ndarray, counts: np.ndarray | None, max_power: int, denom: int = 1) -> list[Fraction]:
    """[sum_i counts_i (values_i/denom)^k for k = 0..max_power] exactly."""
    vals = [int(v) for v in values]
    cnts = [1] * len(vals) if counts is None else [int(c) for c in counts]
    out = []
    pw = [1] * len(vals)
    for k in range(max_power + 1):
        out.append(Fraction(sum(c * p for c, p in zip(cnts, pw)), denom ** k))
        pw = [p * v for p, v in zip(pw, vals)]
    return out


def zonal_gram_determinant(ys: Sequence[Sequence], degree: int, gram=None) -> Fraction:
    """det [Z_{y_i}(y_j)]; nonzero iff the zonals are linearly independent."""
    from .linalg import rank

    G = None if gram is None else [[Fraction(v) for v in row] for row in gram]

    def ip(u, v):
        if G is None:
            return sum(Fraction(a) * b for a, b in zip(u, v))
        return sum(Fraction(u[i]) * G[i][j] * v[j] for i in range(len(u)) for j in range(len(v)))

    d = len(ys[0])
    Zs = [ZonalHarmonic(d, degree, tuple(y)) for y in ys]
    M = [[Z.value(ip(ys[j], Z.axis), ip(ys[j], ys[j]), ip(Z.axis, Z.axis)) for j in range(len(ys))]
         for Z in Zs]
    return _det(M)


def _det(M):
    M = [[Fraction(v) for v in row] for row in M]
    n = len(M)
    det = Fraction(1)
    for c in range(n):
        p = next((r for r in range(c, n) if M[r][c]), None)
        if p is None:
            return Fraction(0)
        if p != c:
            M[c], M[p] = M[p], M[c]
            det = -det
        det *= M[c][c]
        for r in range(c + 1, n):
            f = M[r][c] / M[c][c]
            if f:
                for k in range(c, n):
                    M[r][k] -= f * M[c][k]
    return det
