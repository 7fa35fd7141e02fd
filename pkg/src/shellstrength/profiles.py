"""
Inner-product profiles of lattice shells.

For an axis y, the profile of the shell Lambda_{2m} is the multiset
{<x, y> : x in Lambda_{2m}}.  It is all a zonal harmonic needs, and for
lattices that split as a (glued) product of small blocks it can be counted
exactly, for every shell up to a bound at once, by multiplying the bivariate
generating functions sum_v q^{|v|^2} zeta^{<v, y_i>} of the blocks.  No shell
is ever materialised, which is what lets D6/E6 scans reach m = 300 and E8 scans
reach m = 60.

Supported: Z^n, D_n and E8 (coordinate blocks), E6 (as A2^3 glued by the
class [1,1,1]).  The E6 model differs from the Cartan model used for
enumeration; both are E6 up to isometry.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache, reduce
from itertools import permutations
from math import gcd, isqrt
from typing import Sequence

import numpy as np

from .lattices import A2_GRAM, E6_CARTAN, UnsupportedLattice, get_lattice

# glue model of E6: three A2 blocks, block vectors x = c + g*w with w = (2a+b)/3
E6_GLUE_GRAM = tuple(
    tuple(A2_GRAM[i % 2][j % 2] if i // 2 == j // 2 else 0 for j in range(6)) for i in range(6))


@dataclass(frozen=True)
class Profile:
    lattice: str
    axis: tuple
    axis_norm: Fraction          # <y, y>
    t_denom: int                 # true inner product = stored value / t_denom
    rows: dict                   # two_m -> (values int64 array, counts int64 array)

    def power_sums(self, two_m: int, max_power: int) -> list[Fraction]:
        from .harmonics import power_sums
        vals, cnts = self.rows.get(two_m, (np.zeros(0, np.int64), np.zeros(0, np.int64)))
        return power_sums(vals, cnts, max_power, self.t_denom)

    def size(self, two_m: int) -> int:
        vals, cnts = self.rows.get(two_m, (None, np.zeros(0, np.int64)))
        return int(cnts.sum())


@lru_cache(maxsize=None)
def e6_cartan_to_glue() -> tuple:
    """Integer matrix S (6x6) with (S/3)^T G_glue (S/3) = Cartan matrix of E6.

    Column k is 3 * (k-th simple root) in the A2^3 glue model, found from the
    72 roots of that model with a generic height function; the simple roots
    are then ordered to match E6_CARTAN.
    """
    A = np.array(A2_GRAM, dtype=np.int64)
    G = np.array(E6_GLUE_GRAM, dtype=np.int64)
    roots = []
    for g in range(3):
        blocks = [_a2_coset_vectors(g, 18) for _ in range(3)]
        n9 = [np.einsum("ij,jk,ik->i", b, A, b) for b in blocks]
        for i0, a in enumerate(blocks[0]):
            for i1, b in enumerate(blocks[1]):
                rest = 18 - n9[0][i0] - n9[1][i1]
                if rest < 0:
                    continue
                for c in blocks[2][n9[2] == rest]:
                    roots.append(np.concatenate([a, b, c]))
    roots = np.array(roots, dtype=np.int64)
    if len(roots) != 72:
        raise ArithmeticError(f"glue model has {len(roots)} roots, expected 72")
    height = roots @ np.array([1000003, 10007, 1009, 101, 11, 1], dtype=np.int64)
    pos = roots[height > 0]
    pos_set = {tuple(r) for r in pos}
    simple = [r for r in pos if not any(tuple(r - p) in pos_set for p in pos)]
    cartan = np.array(E6_CARTAN, dtype=np.int64)
    for perm in permutations(range(6)):
        S = np.array([simple[i] for i in perm]).T
        if np.array_equal(S.T @ G @ S, 9 * cartan):
            return tuple(map(tuple, S.tolist()))
    raise ArithmeticError("could not match the E6 Dynkin diagram")


def _a2_coset_vectors(g: int, n9_max: int) -> np.ndarray:
    A = np.array(A2_GRAM, dtype=np.int64)
    B = isqrt(n9_max // 9) + 2
    r = np.arange(-B, B + 1)
    c1, c2 = np.meshgrid(r, r, indexing="ij")
    X = np.stack([3 * c1.ravel() + 2 * g, 3 * c2.ravel() + g], axis=1)
    n9 = np.einsum("ij,jk,ik->i", X, A, X)
    return X[n9 <= n9_max]


def supports_profile(lattice) -> bool:
    spec = get_lattice(lattice)
    return spec.model == "coordinate" or spec.name == "E6"


class _Factor:
    """Block vectors as parallel arrays of scaled norm, scaled inner product, residue."""

    def __init__(self, n, t, r):
        self.n = np.asarray(n, dtype=np.int64)
        self.t = np.asarray(t, dtype=np.int64)
        self.r = np.asarray(r, dtype=np.int64)


def _convolve(factors: list[_Factor], n_max: int, t_max: int, modulus: int) -> tuple:
    """Counts indexed by (residue, norm, t) for the sum over one vector per factor.

    Norms and inner products are compressed by their common step so the dense
    state stays small.
    """
    n0 = [int(f.n.min()) for f in factors]
    nstep = reduce(gcd, (int(v - a) for f, a in zip(factors, n0) for v in f.n), 0) or 1
    tstep = reduce(gcd, (int(v - f.t[0]) for f in factors for v in f.t), 0) or 1
    # every inner product of a factor is congruent to t0 mod tstep
    t0 = [int(f.t[0]) % tstep for f in factors]
    base_n = sum(n0)
    base_t = sum(t0)
    if base_n > n_max:
        return None
    NN = (n_max - base_n) // nstep + 1
    # partial sums obey the same Cauchy-Schwarz bound as the full sum
    lo = -(t_max // tstep) - len(factors) - 1
    hi = t_max // tstep + len(factors) + 1
    TT = hi - lo + 1
    state = np.zeros((modulus, NN, TT), dtype=np.int64)
    state[0, 0, -lo] = 1
    for f, a, b in zip(factors, n0, t0):
        dn = (f.n - a) // nstep
        dt = (f.t - b) // tstep
        new = np.zeros_like(state)
        for k in range(len(dn)):
            i, j, r = int(dn[k]), int(dt[k]), int(f.r[k]) % modulus
            if i >= NN or abs(j) >= TT:
                continue
            src = state[:, : NN - i]
            if j >= 0:
                src = src[:, :, : TT - j]
                dst = (slice(None), slice(i, NN), slice(j, TT))
            else:
                src = src[:, :, -j:]
                dst = (slice(None), slice(i, NN), slice(0, TT + j))
            if r:
                src = np.roll(src, r, axis=0)
            new[dst] += src
        state = new
    return state, base_n, nstep, base_t, tstep, lo


def _coordinate_factors(values: np.ndarray, y: Sequence[int], modulus: int) -> list[_Factor]:
    return [_Factor(values * values, yi * values, values % modulus) for yi in y]


def _a2_coset(g: int, n9_max: int, y2: Sequence[int]) -> _Factor:
    """Block vectors X = 3c + g(2,1) of A2 + g*w with X^T A X <= n9_max."""
    A = np.array(A2_GRAM, dtype=np.int64)
    X = _a2_coset_vectors(g, n9_max)
    n9 = np.einsum("ij,jk,ik->i", X, A, X)
    t3 = X @ (A @ np.asarray(y2, dtype=np.int64))
    return _Factor(n9, t3, np.zeros(len(n9), dtype=np.int64))


def inner_product_profile(lattice, y: Sequence[int], two_m_max: int) -> Profile:
    """Exact counts of <x, y> over every shell Lambda_{2m}, 2m <= two_m_max.

    The axis is given in the registry coordinates of the lattice (true, not
    doubled, coordinates for E8; Cartan coordinates for E6).  For Z2 the
    shells are indexed by the plain squared norm.
    """
    spec = get_lattice(lattice)
    y = [int(v) for v in y]
    if len(y) != spec.dim:
        raise ValueError(f"axis has length {len(y)}, lattice {spec.name} has dimension {spec.dim}")
    if not supports_profile(spec):
        raise UnsupportedLattice(f"no profile model for {spec.name}")
    yy = spec.axis_norm(y)
    if yy == 0:
        raise ValueError("axis must be nonzero")
    extra = 1
    if spec.name == "E6":
        # axis in glue coordinates is S y / 3; use the integral S y and divide later
        y = [int(v) for v in np.array(e6_cartan_to_glue(), dtype=np.int64) @ np.array(y)]
        extra = 3

    if spec.model == "coordinate":
        s = spec.scale_denom
        n_max = s * s * two_m_max
        t_max = s * (isqrt(two_m_max * yy) + 1)
        r = isqrt(n_max)
        allv = np.arange(-r, r + 1, dtype=np.int64)
        if spec.name == "E8":
            comps = [(_coordinate_factors(allv[allv % 2 == 0], y, 4), 4),
                     (_coordinate_factors(allv[allv % 2 == 1], y, 4), 4)]
        else:
            # an even norm already forces an even coordinate sum for D_n
            comps = [(_coordinate_factors(allv, y, 1), 1)]
        norm_scale, t_denom = s * s, s
    elif spec.name == "E6":
        n_max = 9 * two_m_max
        t_max = 9 * (isqrt(two_m_max * yy) + 1)
        comps = [([_a2_coset(g, n_max, y[2 * i: 2 * i + 2]) for i in range(3)], 1) for g in range(3)]
        norm_scale, t_denom = 9, 3 * extra
    else:
        raise UnsupportedLattice(f"no profile model for {spec.name}")

    acc: dict[int, dict[int, int]] = {}
    for factors, modulus in comps:
        res = _convolve(factors, n_max, t_max, modulus)
        if res is None:
            continue
        state, base_n, nstep, base_t, tstep, lo = res
        counts = state[0]
        for i in np.nonzero(counts.any(axis=1))[0]:
            n = base_n + nstep * int(i)
            if n == 0 or n % norm_scale:
                continue
            two_m = n // norm_scale
            row = counts[i]
            nz = np.nonzero(row)[0]
            bucket = acc.setdefault(two_m, {})
            for j in nz:
                t = base_t + tstep * (int(j) + lo)
                bucket[t] = bucket.get(t, 0) + int(row[j])
    rows = {}
    for two_m in sorted(acc):
        if spec.even and two_m % 2:
            continue
        items = sorted(acc[two_m].items())
        rows[two_m] = (np.array([t for t, _ in items], dtype=np.int64),
                       np.array([c for _, c in items], dtype=np.int64))
    return Profile(spec.name, tuple(y), Fraction(yy), t_denom, rows)
