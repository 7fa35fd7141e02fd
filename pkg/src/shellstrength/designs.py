"""
Spherical design checks on explicit point sets.

Points are kept unnormalised with a common squared norm rho2, so every test
is exact: harmonic sums are homogeneous, and the Gegenbauer kernel only needs
<x, y> / rho2.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb, prod
from typing import Iterable, Sequence

import numpy as np

from .harmonics import (HarmonicCapExceeded, harmonic_basis, monomial_sums, monomials)


class NotAntipodal(ValueError):
    pass


class PreconditionFailed(ValueError):
    pass


class MethodDisagreement(ArithmeticError):
    pass


@dataclass(frozen=True)
class PointSet:
    """Integer points with a common squared norm; true points are coords / scale."""

    dim: int
    coords: np.ndarray = field(repr=False)     # int64, one point per row
    rho2: int                                  # common <x, x> of the rows

    @classmethod
    def from_points(cls, points) -> "PointSet":
        arr = np.asarray(points, dtype=np.int64)
        if arr.ndim != 2 or len(arr) == 0:
            raise ValueError("need a nonempty 2-d array of points")
        norms = np.einsum("ij,ij->i", arr, arr)
        if not np.all(norms == norms[0]):
            raise ValueError("points do not share a common squared norm")
        if len(np.unique(arr, axis=0)) != len(arr):
            raise ValueError("duplicate points")
        if norms[0] == 0:
            raise ValueError("points must be nonzero")
        return cls(arr.shape[1], arr, int(norms[0]))

    @classmethod
    def from_shell(cls, shell) -> "PointSet":
        if shell.lattice.model != "coordinate":
            raise ValueError("design checks need orthonormal coordinates")
        return cls.from_points(shell.points)

    def __len__(self):
        return len(self.coords)

    def subset(self, idx: Sequence[int]) -> "PointSet":
        return PointSet.from_points(self.coords[np.asarray(idx, dtype=np.int64)])

    def transformed(self, perm: Sequence[int], signs: Sequence[int]) -> "PointSet":
        out = self.coords[:, list(perm)] * np.asarray(signs, dtype=np.int64)
        return PointSet.from_points(out)

    def gram_counts(self) -> tuple[np.ndarray, np.ndarray]:
        """Distinct pairwise inner products (diagonal included) with multiplicities."""
        G = self.coords @ self.coords.T
        return np.unique(G, return_counts=True)


# ---------------------------------------------------------------------------
# Gegenbauer kernel


@lru_cache(maxsize=None)
def gegenbauer(d: int, n: int) -> tuple[Fraction, ...]:
    """Coefficients (constant first) of C_n^{(d-2)/2}; Chebyshev T_n when d = 2.

    Normalisation: C_0 = 1, C_1 = 2*lam*t (T_1 = t), so in d = 4, C_2 = 4t^2 - 1.
    """
    if d < 2 or n < 0:
        raise ValueError("need d >= 2 and n >= 0")
    if d == 2:
        return chebyshev_t(n)
    lam = Fraction(d - 2, 2)
    prev, cur = (Fraction(1),), (Fraction(0), 2 * lam)
    if n == 0:
        return prev
    for k in range(2, n + 1):
        a = [Fraction(0)] + [2 * (k + lam - 1) * c for c in cur]
        for i, c in enumerate(prev):
            a[i] -= (k + 2 * lam - 2) * c
        prev, cur = cur, tuple(v / k for v in a)
    return cur


@lru_cache(maxsize=None)
def chebyshev_t(n: int) -> tuple[Fraction, ...]:
    prev, cur = (Fraction(1),), (Fraction(0), Fraction(1))
    if n == 0:
        return prev
    for _ in range(n - 1):
        a = [Fraction(0)] + [2 * c for c in cur]
        for i, c in enumerate(prev):
            a[i] -= c
        prev, cur = cur, tuple(a)
    return cur


@lru_cache(maxsize=None)
def chebyshev_u(n: int) -> tuple[Fraction, ...]:
    if n < 0:
        return (Fraction(0),)
    prev, cur = (Fraction(1),), (Fraction(0), Fraction(2))
    if n == 0:
        return prev
    for _ in range(n - 1):
        a = [Fraction(0)] + [2 * c for c in cur]
        for i, c in enumerate(prev):
            a[i] -= c
        prev, cur = cur, tuple(a)
    return cur


def poly_eval(coeffs: Sequence, t):
    acc = 0
    for c in reversed(coeffs):
        acc = acc * t + c
    return acc


def kernel_sum(X: PointSet, degree: int) -> Fraction:
    """sum_{x, y in X} C_degree(<x, y> / rho2), diagonal included; always >= 0."""
    vals, cnts = X.gram_counts()
    C = gegenbauer(X.dim, degree)
    return sum((int(c) * poly_eval(C, Fraction(int(v), X.rho2)) for v, c in zip(vals, cnts)),
               Fraction(0))


def harmonic_sums(X: PointSet, degree: int) -> list[Fraction]:
    basis = harmonic_basis(X.dim, degree)
    keys = set()
    for P in basis:
        keys.update(P.terms)
    sums = monomial_sums(X.coords, keys)
    return [sum((c * sums[k] for k, c in P.terms.items()), Fraction(0)) for P in basis]


@dataclass
class DesignVerdict:
    degrees_checked: list
    members: list
    method: str
    certificates: dict = field(default_factory=dict)   # degree -> {"kernel": str, "basis_index": int}


def is_design_at_degree(X: PointSet, degree: int, method: str = "both") -> bool:
    """Whether every harmonic of the given degree sums to zero over X.

    method is "harmonic", "kernel" or "both"; "both" raises MethodDisagreement
    if the two answers differ.  The harmonic method falls back to the kernel
    when the basis would be too large.
    """
    return design_verdict(X, [degree], method).members == [degree]


def design_verdict(X: PointSet, degrees: Iterable[int], method: str = "both") -> DesignVerdict:
    if method not in ("harmonic", "kernel", "both"):
        raise ValueError(f"unknown method {method!r}")
    degrees = list(degrees)
    members, certs = [], {}
    used = method
    for l in degrees:
        if l < 1:
            raise ValueError("degrees must be positive")
        cert = {}
        answers = []
        if method in ("kernel", "both"):
            k = kernel_sum(X, l)
            if k < 0:
                raise ArithmeticError(f"negative kernel sum {k} at degree {l}")
            cert["kernel"] = str(k)
            answers.append(k == 0)
        if method in ("harmonic", "both"):
            try:
                sums = harmonic_sums(X, l)
                nz = next((i for i, s in enumerate(sums) if s), None)
                if nz is not None:
                    cert["basis_index"] = nz
                    cert["value"] = str(sums[nz])
                answers.append(nz is None)
            except HarmonicCapExceeded:
                if method == "harmonic":
                    k = kernel_sum(X, l)
                    cert["kernel"] = str(k)
                    answers.append(k == 0)
                used = "kernel-fallback"
        if len(set(answers)) > 1:
            raise MethodDisagreement(f"harmonic and kernel verdicts differ at degree {l}")
        if answers[0]:
            members.append(l)
        certs[l] = cert
    return DesignVerdict(degrees, members, used, certs)


# ---------------------------------------------------------------------------
# averaging, bounds, half sets


def sphere_moment(alpha: Sequence[int]) -> Fraction:
    """Average of x^alpha over the unit sphere S^{d-1}."""
    d = len(alpha)
    if any(a % 2 for a in alpha):
        return Fraction(0)
    num = prod(_double_factorial(a - 1) for a in alpha)
    den = prod(d + 2 * j for j in range(sum(alpha) // 2))
    return Fraction(num, den)


def _double_factorial(n: int) -> int:
    out = 1
    while n > 1:
        out *= n
        n -= 2
    return out


def verify_averaging(X: PointSet, t: int) -> bool:
    """Monomial averages over X equal sphere moments for all degrees <= t.

    X must first be a design at every degree 1..t; otherwise
    PreconditionFailed names the first failing degree.
    """
    for l in range(1, t + 1):
        if kernel_sum(X, l) != 0:
            raise PreconditionFailed(f"not a design at degree {l}")
    n = len(X)
    for deg in range(0, t + 1):
        exps = monomials(X.dim, deg)
        sums = monomial_sums(X.coords, exps)
        for a in exps:
            avg = Fraction(sums[a], n)
            if deg % 2 == 0:
                avg /= Fraction(X.rho2) ** (deg // 2)
            elif avg != 0:
                return False
            if avg != sphere_moment(a):
                return False
    return True


def fisher_bound(d: int, t: int) -> int:
    if d < 2 or t < 1:
        raise ValueError("need d >= 2 and t >= 1")
    e, odd = divmod(t, 2)
    if odd:
        return 2 * comb(d + e - 1, e)
    return comb(d + e - 1, e) + comb(d + e - 2, e - 1)


def is_antipodal(X: PointSet) -> bool:
    rows = {tuple(r) for r in X.coords.tolist()}
    return all(tuple(-v for v in r) in rows for r in rows)


def half_set(X: PointSet) -> PointSet:
    """Representatives whose first nonzero coordinate is positive."""
    if not is_antipodal(X):
        raise NotAntipodal("half sets need an antipodal point set")
    keep = [i for i, r in enumerate(X.coords.tolist()) if next(v for v in r if v) > 0]
    return X.subset(keep)


def inner_product_set(X: PointSet) -> set[Fraction]:
    """A(X) = {<x, y> / rho2 : x != y}."""
    G = X.coords @ X.coords.T
    np.fill_diagonal(G, X.rho2 + 1)          # marker outside [-rho2, rho2]
    vals = np.unique(G)
    return {Fraction(int(v), X.rho2) for v in vals if v != X.rho2 + 1}


# ---------------------------------------------------------------------------
# three points on the circle

# exact (cos, sin) of k*pi/6 is not rational in general; only angles whose
# cosine is rational are accepted, with sines stored as a + b*sqrt(3)
_COS = {Fraction(0): Fraction(1), Fraction(1, 3): Fraction(1, 2), Fraction(1, 2): Fraction(0),
        Fraction(2, 3): Fraction(-1, 2), Fraction(1): Fraction(-1), Fraction(4, 3): Fraction(-1, 2),
        Fraction(3, 2): Fraction(0), Fraction(5, 3): Fraction(1, 2)}


def _cos_sin(r: Fraction) -> tuple[Fraction, tuple[Fraction, Fraction]]:
    r = Fraction(r) % 2
    if r not in _COS:
        raise ValueError(f"unsupported angle {r}*pi: cosine is not rational")
    sign = 1 if r < 1 else -1
    if r.denominator == 3:
        return _COS[r], (Fraction(0), Fraction(sign, 2))
    if r.denominator == 2:
        return _COS[r], (Fraction(sign), Fraction(0))
    return _COS[r], (Fraction(0), Fraction(0))


def triangle_strength(theta1, theta2, L: int) -> set[int]:
    """Degrees l <= L in T of {1, e^{i theta1}, e^{i theta2}}; angles in units of pi.

    cos(l theta) = T_l(cos theta) and sin(l theta) = sin(theta) U_{l-1}(cos theta).
    """
    angles = [Fraction(0), Fraction(theta1), Fraction(theta2)]
    cs = [_cos_sin(a) for a in angles]
    out = set()
    for l in range(1, L + 1):
        T, U = chebyshev_t(l), chebyshev_u(l - 1)
        c_sum = sum(poly_eval(T, c) for c, _ in cs)
        s_sum = [Fraction(0), Fraction(0)]
        for c, (a, b) in cs:
            u = poly_eval(U, c)
            s_sum[0] += a * u
            s_sum[1] += b * u
        if c_sum == 0 and s_sum == [0, 0]:
            out.add(l)
    return out
