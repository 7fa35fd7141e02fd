"""
Weighted theta series, theta-map image ranks and eta-product identities.

A weight is either an explicit `Polynomial` (orthonormal coordinate lattices
only) or a `ZonalHarmonic`.  Zonal sums need only the distribution of <x, y>
over a shell, which comes either from enumerated shells or, where the lattice
has a block model, from an exact inner-product profile.  Both routes give the
same exact numbers; `route` picks one explicitly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil
from typing import Sequence

import numpy as np

from .harmonics import (Polynomial, ZonalHarmonic, harm_dim, polynomial_sums, power_sums,
                        random_harmonic)
from .lattices import LatticeSpec, enumerate_shell, get_lattice, shell_size
from .linalg import independent_subset, rank
from .profiles import Profile, inner_product_profile, supports_profile
from .qseries import QSeries

MU = {1: 1, 2: 3, 3: 4, 4: 6}


def shell_index(spec: LatticeSpec, m: int) -> int:
    """Squared norm of the shell carried by q^m (2m for even lattices, m otherwise)."""
    return 2 * m if spec.even else m


def default_coeff_depth(lattice, degree: int) -> int:
    """Sturm-style depth ceil((d/2 + l) * mu / 12) + 2."""
    spec = get_lattice(lattice)
    mu = MU.get(spec.level)
    if mu is None:
        raise ValueError(f"no level data for {spec.name}")
    return ceil(Fraction(spec.dim + 2 * degree, 2) * mu / 12) + 2


@dataclass(frozen=True)
class ThetaSeries:
    lattice: str
    degree: int
    weight: object                 # Polynomial or ZonalHarmonic
    series: QSeries                # offset 0; coefficient of q^m is a(m)
    computed_up_to: int
    method: str = "enumeration"

    def coefficient(self, m: int):
        return self.series[m]

    def to_json(self) -> dict:
        w = self.weight
        if isinstance(w, Polynomial):
            wj = {"polynomial": w.to_json()}
        else:
            wj = {"zonal_axis": [str(v) for v in w.axis]}
        return {"lattice": self.lattice, "degree": self.degree, "method": self.method,
                "computed_up_to": self.computed_up_to, "weight": wj,
                "series": self.series.to_json()}


# ---------------------------------------------------------------------------
# coefficient computation

_PROFILES: dict[tuple, Profile] = {}
_PROFILE_REACH: dict[tuple, int] = {}


def cached_profile(lattice, axis: Sequence[int], two_m_max: int) -> Profile:
    spec = get_lattice(lattice)
    key = (spec.name, tuple(int(v) for v in axis))
    if _PROFILE_REACH.get(key, -1) < two_m_max:
        _PROFILES[key] = inner_product_profile(spec, key[1], two_m_max)
        _PROFILE_REACH[key] = two_m_max
    return _PROFILES[key]


def clear_profile_cache():
    _PROFILES.clear()
    _PROFILE_REACH.clear()


def choose_route(lattice, route: str = "auto") -> str:
    spec = get_lattice(lattice)
    if route == "auto":
        return "profile" if supports_profile(spec) else "enumeration"
    if route not in ("profile", "enumeration"):
        raise ValueError(f"unknown route {route!r}")
    if route == "profile" and not supports_profile(spec):
        raise ValueError(f"no profile model for {spec.name}")
    return route


def _shell_power_sums_enum(spec: LatticeSpec, two_m: int, axes, max_power: int) -> list[list[Fraction]]:
    pts = enumerate_shell(spec, two_m).points
    out = []
    for y in axes:
        if len(pts) == 0:
            out.append([Fraction(0)] * (max_power + 1))
            continue
        vals, cnts = np.unique(spec.inner(pts, y), return_counts=True)
        out.append(power_sums(vals, cnts, max_power, spec.scale_denom))
    return out


def zonal_coefficient_table(lattice, axes: Sequence[Sequence[int]], degrees: Sequence[int],
                            m_max: int, route: str = "auto") -> dict[tuple[int, int], list[Fraction]]:
    """{(axis index, degree): [a(0), ..., a(m_max)]} for the zonal harmonics Z_{axis}.

    Axes are in the registry coordinates of the lattice.
    """
    spec = get_lattice(lattice)
    route = choose_route(spec, route)
    degrees = list(degrees)
    top = max(degrees)
    table = {(i, l): [Fraction(0)] * (m_max + 1) for i in range(len(axes)) for l in degrees}
    yys = [spec.axis_norm(y) for y in axes]
    zonals = {l: ZonalHarmonic(spec.dim, l, ()) for l in degrees}
    for l in degrees:
        if l == 0:
            for i in range(len(axes)):
                table[(i, 0)][0] = Fraction(1)
    if route == "profile":
        profs = [cached_profile(spec, y, shell_index(spec, m_max)) for y in axes]
    for m in range(1, m_max + 1):
        two_m = shell_index(spec, m)
        if route == "profile":
            sums = [p.power_sums(two_m, top) for p in profs]
        else:
            sums = _shell_power_sums_enum(spec, two_m, axes, top)
        for i, ps in enumerate(sums):
            for l in degrees:
                table[(i, l)][m] = zonals[l].shell_sum(ps, two_m, yys[i])
    return table


def weighted_theta(lattice, weight, m_max: int, route: str = "auto") -> ThetaSeries:
    """Exact theta series sum_m (sum_{x in shell m} weight(x)) q^m for m <= m_max."""
    spec = get_lattice(lattice)
    if m_max < 0:
        raise ValueError("m_max must be nonnegative")
    if isinstance(weight, ZonalHarmonic):
        if weight.dim != spec.dim:
            raise ValueError(f"dimension mismatch: weight {weight.dim}, lattice {spec.dim}")
        r = choose_route(spec, route)
        t = zonal_coefficient_table(spec, [weight.axis], [weight.degree], m_max, r)
        coeffs = t[(0, weight.degree)]
        return ThetaSeries(spec.name, weight.degree, weight, QSeries(0, _normal(coeffs)), m_max, r)
    if not isinstance(weight, Polynomial):
        raise TypeError("weight must be a Polynomial or a ZonalHarmonic")
    if weight.dim != spec.dim:
        raise ValueError(f"dimension mismatch: polynomial {weight.dim}, lattice {spec.dim}")
    coeffs = [Fraction(0)] * (m_max + 1)
    if weight.degree == 0:
        c = weight.terms.get((0,) * spec.dim, Fraction(0))
        coeffs[0] = Fraction(c)
        for m in range(1, m_max + 1):
            coeffs[m] = c * shell_size(spec, shell_index(spec, m))
        return ThetaSeries(spec.name, 0, weight, QSeries(0, _normal(coeffs)), m_max, "enumeration")
    if spec.model != "coordinate":
        raise ValueError(f"{spec.name} has a Gram model; use a ZonalHarmonic weight there")
    for m in range(1, m_max + 1):
        pts = enumerate_shell(spec, shell_index(spec, m)).points
        coeffs[m] = polynomial_sums([weight], pts, spec.scale_denom)[0]
    return ThetaSeries(spec.name, weight.degree, weight, QSeries(0, _normal(coeffs)), m_max, "enumeration")


def polynomial_theta_table(lattice, polys: Sequence[Polynomial], m_max: int) -> list[list[Fraction]]:
    """Coefficient lists a_P(0..m_max) for several polynomials, sharing each shell."""
    spec = get_lattice(lattice)
    if spec.model != "coordinate":
        raise ValueError(f"{spec.name} has a Gram model; use zonal weights there")
    out = [[Fraction(0)] * (m_max + 1) for _ in polys]
    for i, P in enumerate(polys):
        if P.degree == 0:
            out[i][0] = Fraction(P.terms.get((0,) * spec.dim, 0))
    for m in range(1, m_max + 1):
        pts = enumerate_shell(spec, shell_index(spec, m)).points
        for i, v in enumerate(polynomial_sums(polys, pts, spec.scale_denom)):
            out[i][m] = v
    return out


def _normal(coeffs: Sequence[Fraction]) -> tuple:
    return tuple(int(c) if Fraction(c).denominator == 1 else Fraction(c) for c in coeffs)


# ---------------------------------------------------------------------------
# image ranks


def sample_axes(lattice, count: int, seed: int = 0, bound: int = 3) -> list[tuple[int, ...]]:
    """Deterministic distinct nonzero integer axes with entries in [-bound, bound]."""
    spec = get_lattice(lattice)
    rng = np.random.default_rng(seed)
    out: list[tuple[int, ...]] = []
    seen = set()
    while len(out) < count:
        y = tuple(int(v) for v in rng.integers(-bound, bound + 1, size=spec.dim))
        if any(y) and y not in seen:
            seen.add(y)
            out.append(y)
    return out


@dataclass
class ImageRankReport:
    lattice: str
    degree: int
    sample_count: int
    coeff_depth: int
    rank_lower_bound: int
    stabilized: bool
    expected_dim: int | None = None
    family: str = "zonal"
    route: str = "enumeration"
    first_rank: int = 0
    samples: list = field(default_factory=list)   # axes or polynomials, doubled set
    spanning: list = field(default_factory=list)  # indices into samples
    vectors: list = field(default_factory=list)   # coefficient vectors of the doubled set

    @property
    def matches_expected(self) -> bool | None:
        if self.expected_dim is None:
            return None
        return self.rank_lower_bound == self.expected_dim

    def spanning_weights(self) -> list:
        if self.family == "zonal":
            spec = get_lattice(self.lattice)
            return [ZonalHarmonic(spec.dim, self.degree, tuple(self.samples[i])) for i in self.spanning]
        return [self.samples[i] for i in self.spanning]

    def to_json(self) -> dict:
        samples = ([list(s) for s in self.samples] if self.family == "zonal"
                   else [p.to_json() for p in self.samples])
        return {"lattice": self.lattice, "degree": self.degree, "sample_count": self.sample_count,
                "coeff_depth": self.coeff_depth, "rank_lower_bound": self.rank_lower_bound,
                "stabilized": self.stabilized, "expected_dim": self.expected_dim,
                "family": self.family, "route": self.route, "first_rank": self.first_rank,
                "spanning": [samples[i] for i in self.spanning]}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def _theta_vectors(spec, degree, family, samples, depth, route):
    if family == "zonal":
        table = zonal_coefficient_table(spec, samples, [degree], depth, route)
        return [table[(i, degree)][1:] for i in range(len(samples))]
    return [row[1:] for row in polynomial_theta_table(spec, samples, depth)]


def image_rank(lattice, degree: int, samples: int | None = None, coeff_depth: int | None = None,
               expected_dim: int | None = None, family: str = "zonal", route: str = "auto",
               seed: int = 0) -> ImageRankReport:
    """Exact rank of sampled theta coefficient vectors, with one doubling for stabilization.

    Random zonal harmonics (or random projected polynomials when
    family="polynomial") stand in for a basis of Harm_l; the rank they reach
    is a lower bound on dim Im theta_{L,l}.  The doubled run reuses the first
    samples, so the reported spanning subset comes from the larger set.
    """
    spec = get_lattice(lattice)
    if degree < 1:
        raise ValueError("degree must be positive")
    if expected_dim is None:
        from .tables import expected_dimension
        expected_dim = expected_dimension(spec.name, degree)
    n = samples if samples is not None else 2 * (expected_dim if expected_dim is not None else 0) + 4
    depth = coeff_depth if coeff_depth is not None else default_coeff_depth(spec, degree)
    route = choose_route(spec, route) if family == "zonal" else "enumeration"
    if family == "zonal":
        pool = sample_axes(spec, 2 * n, seed)
    elif family == "polynomial":
        pool = [random_harmonic(spec.dim, degree, seed + 7919 * i) for i in range(2 * n)]
    else:
        raise ValueError(f"unknown family {family!r}")
    vecs = _theta_vectors(spec, degree, family, pool, 2 * depth, route)
    first = rank([v[:depth] for v in vecs[:n]])
    spanning = independent_subset(vecs)
    second = len(spanning)
    return ImageRankReport(spec.name, degree, n, depth, max(first, second), first == second,
                           expected_dim, family, route, first, pool, spanning, vecs)


def upper_dimension(lattice, degree: int) -> int:
    """harm_dim bound, the only upper bound the package proves itself."""
    return harm_dim(get_lattice(lattice).dim, degree)


# ---------------------------------------------------------------------------
# eta identities


@dataclass(frozen=True)
class IdentityCheck:
    holds: bool
    checked_up_to: int
    first_mismatch: tuple | None = None   # (m, theta value, scalar * series value)

    def __bool__(self):
        return self.holds


def verify_eta_identity(lattice, weight, series: QSeries, scalar, m_max: int,
                        theta: ThetaSeries | None = None) -> IdentityCheck:
    """Check a(m) = scalar * [q^m] series for m = 0..m_max.

    `series` may start at an integral power of q (offset24 divisible by 24).
    A precomputed `theta` is used instead of recomputing when given.
    """
    if series.offset24 % 24:
        raise ValueError("series must have an integral leading exponent")
    shift = series.offset24 // 24
    if series.precision + shift < m_max + 1:
        raise ValueError(f"series known only to q^{series.precision + shift - 1}, need q^{m_max}")
    if theta is None:
        theta = weighted_theta(lattice, weight, m_max)
    elif theta.computed_up_to < m_max:
        raise ValueError(f"theta known only to q^{theta.computed_up_to}, need q^{m_max}")
    scalar = Fraction(scalar)
    for m in range(m_max + 1):
        rhs = scalar * (series[m - shift] if m >= shift else 0)
        if theta.series[m] != rhs:
            return IdentityCheck(False, m_max, (m, theta.series[m], rhs))
    return IdentityCheck(True, m_max)


def p4_polynomial(d: int = 8) -> Polynomial:
    """7 sum x_i^4 - 6 sum_{i<j} x_i^2 x_j^2 (harmonic in dimension 8)."""
    terms = {}
    for i in range(d):
        e = [0] * d
        e[i] = 4
        terms[tuple(e)] = Fraction(7)
        for j in range(i + 1, d):
            e = [0] * d
            e[i] = e[j] = 2
            terms[tuple(e)] = Fraction(-6)
    return Polynomial(d, 4, terms)
