"""
Harmonic strength of lattice shells and the coefficient criteria around it.

An even degree l lies in T(shell m) exactly when every theta series in a
spanning set of Im theta_{L,l} has vanishing q^m coefficient.  Spanning sets
come from `theta.image_rank`; coefficients come from direct computation
(enumeration or profiles) or from lifts through a generator ring.  Verdicts
that rest on an unstabilized rank are reported as inconclusive rather than
guessed.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from . import qseries
from .harmonics import ZonalHarmonic, harmonic_basis, polynomial_sums, zonal_gram_determinant
from .lattices import enumerate_shell, get_lattice
from .modring import LiftFailed, fit_and_extend
from .profiles import supports_profile
from .theta import (cached_profile, choose_route, image_rank, p4_polynomial, polynomial_theta_table,
                    shell_index, weighted_theta, zonal_coefficient_table)

log = logging.getLogger(__name__)

MEMBER, EXCLUDED, INCONCLUSIVE = "member", "excluded", "inconclusive"


@dataclass
class StrengthReport:
    lattice: str
    m: int
    L: int
    verdicts: dict = field(default_factory=dict)    # l -> member | excluded | inconclusive
    methods: dict = field(default_factory=dict)     # l -> rank-zero | profile | enumeration | lifted | basis
    witnesses: dict = field(default_factory=dict)   # l -> {"axis"/"basis_index", "value"}

    @property
    def member_degrees(self) -> frozenset:
        return frozenset(l for l, v in self.verdicts.items() if v == MEMBER)

    @property
    def inconclusive_degrees(self) -> frozenset:
        return frozenset(l for l, v in self.verdicts.items() if v == INCONCLUSIVE)

    def to_json(self) -> dict:
        return {"lattice": self.lattice, "m": self.m, "L": self.L,
                "members": sorted(self.member_degrees),
                "odd_degrees": "members by convention",
                "verdicts": {str(l): self.verdicts[l] for l in sorted(self.verdicts)},
                "methods": {str(l): self.methods[l] for l in sorted(self.methods)},
                "witnesses": {str(l): self.witnesses[l] for l in sorted(self.witnesses)}}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    @classmethod
    def from_json(cls, data) -> "StrengthReport":
        if isinstance(data, str):
            data = json.loads(data)
        return cls(data["lattice"], data["m"], data["L"],
                   {int(k): v for k, v in data["verdicts"].items()},
                   {int(k): v for k, v in data["methods"].items()},
                   {int(k): v for k, v in data["witnesses"].items()})


@dataclass
class ScanResult:
    criterion: str
    start: int
    stop: int
    zero_positions: list = field(default_factory=list)
    details: dict = field(default_factory=dict)

    @property
    def clean(self) -> bool:
        return not self.zero_positions

    def to_json(self) -> dict:
        return {"criterion": self.criterion, "range": [self.start, self.stop],
                "zero_positions": self.zero_positions, "details": self.details}


# ---------------------------------------------------------------------------
# spanning sets and coefficient tables


@lru_cache(maxsize=None)
def spanning_report(lattice: str, degree: int):
    return image_rank(lattice, degree)


def _even_degrees(L: int) -> list[int]:
    return list(range(2, L + 1, 2))


def _two_dim_basis(spec, degree: int):
    """Certified spanning set of Harm_l(R^2) adapted to the lattice model."""
    if spec.model == "coordinate":
        return "polynomial", list(harmonic_basis(2, degree))
    # Gram model: two zonals with a nonzero kernel determinant span Harm_l
    cands = [(1, 0), (0, 1), (1, 1), (1, 2), (2, 1), (1, 3), (3, 1), (2, 3)]
    for i in range(len(cands)):
        for j in range(i + 1, len(cands)):
            if zonal_gram_determinant([cands[i], cands[j]], degree, spec.gram):
                return "zonal", [cands[i], cands[j]]
    raise ArithmeticError(f"no spanning zonal pair at degree {degree}")


def coefficient_tables(lattice, L: int, m_max: int, method: str = "auto",
                       lift_source: int | None = None) -> dict:
    """{l: (method, weights, rows, status)} with rows[i][m] the q^m coefficient of weight i.

    status is "ok", "rank-zero" or "unstabilized".  method is "auto",
    "direct" or "lifted"; auto lifts at levels 1 and 2 and computes directly
    elsewhere.
    """
    spec = get_lattice(lattice)
    out = {}
    if spec.dim == 2:
        for l in _even_degrees(L):
            kind, weights = _two_dim_basis(spec, l)
            if kind == "polynomial":
                rows = polynomial_theta_table(spec, weights, m_max)
                out[l] = ("basis", [("basis_index", i) for i in range(len(weights))], rows, "ok")
            else:
                t = zonal_coefficient_table(spec, weights, [l], m_max, "enumeration")
                out[l] = ("basis", [("axis", list(y)) for y in weights],
                          [t[(i, l)] for i in range(len(weights))], "ok")
        return out
    lift = method == "lifted" or (method == "auto" and spec.level in (1, 2))
    route = choose_route(spec)
    for l in _even_degrees(L):
        rep = spanning_report(spec.name, l)
        if rep.rank_lower_bound == 0 and rep.stabilized:
            out[l] = ("rank-zero", [], [], "rank-zero")
            continue
        status = "ok" if rep.stabilized else "unstabilized"
        axes = [rep.samples[i] for i in rep.spanning]
        weights = [("axis", list(y)) for y in axes]
        rows = None
        used = route
        if lift:
            try:
                rows = _lifted_rows(spec, l, axes, m_max, lift_source)
                used = "lifted"
            except LiftFailed as exc:
                log.warning("%s l=%d: %s; falling back to direct coefficients", spec.name, l, exc)
        if rows is None:
            t = zonal_coefficient_table(spec, axes, [l], m_max, route)
            rows = [t[(i, l)] for i in range(len(axes))]
        out[l] = (used, weights, rows, status)
    return out


def _lifted_rows(spec, degree: int, axes, m_max: int, lift_source: int | None) -> list[list]:
    from .modring import least_fit_depth
    weight = spec.dim // 2 + degree
    src = lift_source or least_fit_depth(spec.level, weight) + 10
    t = zonal_coefficient_table(spec, axes, [degree], src)
    rows = []
    for i in range(len(axes)):
        lf = fit_and_extend(t[(i, degree)], spec.level, weight, m_max + 1)
        rows.append(list(lf.extended.coeffs))
    return rows


def _verdicts(lattice: str, m: int, L: int, tables: dict) -> StrengthReport:
    rep = StrengthReport(lattice, m, L)
    for l, (method, weights, rows, status) in tables.items():
        rep.methods[l] = method
        if status == "rank-zero":
            rep.verdicts[l] = MEMBER
            continue
        hit = next((i for i, r in enumerate(rows) if r[m] != 0), None)
        if hit is not None:
            key, val = weights[hit]
            rep.verdicts[l] = EXCLUDED
            rep.witnesses[l] = {key: val, "value": str(rows[hit][m])}
        elif status == "ok":
            rep.verdicts[l] = MEMBER
        else:
            rep.verdicts[l] = INCONCLUSIVE
    return rep


def shell_is_empty(lattice, m: int) -> bool:
    """Emptiness of shell m, from a profile where one exists (no point storage)."""
    spec = get_lattice(lattice)
    if supports_profile(spec):
        axis = (1,) + (0,) * (spec.dim - 1)
        need = shell_index(spec, m)
        prof = cached_profile(spec, axis, max(need, _reach(spec, axis)))
        return prof.size(need) == 0
    return len(enumerate_shell(spec, shell_index(spec, m))) == 0


def _prewarm_emptiness(spec, m_max: int):
    if supports_profile(spec):
        axis = (1,) + (0,) * (spec.dim - 1)
        cached_profile(spec, axis, max(shell_index(spec, m_max), _reach(spec, axis)))


def _reach(spec, axis) -> int:
    from .theta import _PROFILE_REACH
    return _PROFILE_REACH.get((spec.name, tuple(axis)), 0)


def _check_nonempty(spec, m: int):
    if shell_is_empty(spec, m):
        raise ValueError(f"shell m={m} of {spec.name} is empty")


def strength_upto(lattice, m: int, L: int, method: str = "auto") -> StrengthReport:
    """Even degrees l <= L in T(shell m), with per-degree method and witnesses."""
    spec = get_lattice(lattice)
    _check_nonempty(spec, m)
    if method == "auto":
        method = "direct"
    return _verdicts(spec.name, m, L, coefficient_tables(spec, L, m, method))


def appendix_strength_scan(lattice, m_max: int, L: int, method: str = "auto",
                           checkpoint: str | Path | None = None, m_min: int = 1) -> list[StrengthReport]:
    """Strength reports for every nonempty shell m_min <= m <= m_max.

    With `checkpoint`, reports are appended to a JSONL file in blocks of 100 m
    values and already present m are loaded instead of recomputed.
    """
    spec = get_lattice(lattice)
    done: dict[int, StrengthReport] = {}
    path = Path(checkpoint) if checkpoint else None
    if path is not None and path.exists():
        for line in path.read_text().splitlines():
            if line.strip():
                r = StrengthReport.from_json(line)
                if r.lattice == spec.name and r.L == L:
                    done[r.m] = r
    todo = [m for m in range(m_min, m_max + 1) if m not in done]
    if todo:
        tables = coefficient_tables(spec, L, m_max, method)
        _prewarm_emptiness(spec, m_max)
        block = []
        for m in todo:
            if shell_is_empty(spec, m):
                continue
            r = _verdicts(spec.name, m, L, tables)
            done[m] = r
            block.append(r)
            if path is not None and (len(block) == 100 or m == todo[-1]):
                with path.open("a") as fh:
                    for b in block:
                        fh.write(b.dumps() + "\n")
                block = []
    return [done[m] for m in sorted(done) if m_min <= m <= m_max]


def dual_route_disagreements(lattice, L: int, m_max: int) -> list[tuple[int, int]]:
    """(l, m) where lifted and direct coefficients differ (expected: none)."""
    spec = get_lattice(lattice)
    lifted = coefficient_tables(spec, L, m_max, "lifted")
    direct = coefficient_tables(spec, L, m_max, "direct")
    bad = []
    for l in lifted:
        if lifted[l][0] != "lifted":
            continue
        for rl, rd in zip(lifted[l][2], direct[l][2]):
            bad.extend((l, m) for m in range(m_max + 1) if rl[m] != rd[m])
    return bad


def replay_witness(lattice, m: int, degree: int, witness: dict, route: str = "auto") -> Fraction:
    """Recompute a stored witness coefficient from scratch."""
    spec = get_lattice(lattice)
    if "axis" in witness:
        Z = ZonalHarmonic(spec.dim, degree, tuple(witness["axis"]))
        r = "enumeration" if spec.model == "gram" else route
        return Fraction(weighted_theta(spec, Z, m, r).series[m])
    P = list(harmonic_basis(spec.dim, degree))[witness["basis_index"]]
    pts = enumerate_shell(spec, shell_index(spec, m)).points
    return polynomial_sums([P], pts, spec.scale_denom)[0]


# ---------------------------------------------------------------------------
# named criteria


@dataclass
class EquivalenceRow:
    m: int
    coefficient: int                 # tau_2(m) or tau(m)
    degree_in_strength: bool
    consistent: bool


def theorem1_check(m_max: int = 500) -> list[EquivalenceRow]:
    """6 in T((D4)_{2m}) iff tau_2(m) = 0, with a full basis of Harm_6(R^4) on enumerated shells."""
    t2 = qseries.tau2(m_max)
    basis = list(harmonic_basis(4, 6))
    rows = []
    for m in range(1, m_max + 1):
        pts = enumerate_shell("D4", 2 * m).points
        sums = polynomial_sums(basis, pts)
        member = all(s == 0 for s in sums)
        rows.append(EquivalenceRow(m, t2[m], member, member == (t2[m] == 0)))
    return rows


def e8_corollary_check(m_max: int = 60, route: str = "auto") -> list[EquivalenceRow]:
    """8 in T((E8)_{2m}) iff tau(m) = 0, using a rank-spanning zonal sample."""
    t = qseries.tau(m_max)
    rep = image_rank("E8", 8, route=route)
    if rep.rank_lower_bound != 1 or not rep.stabilized:
        raise ArithmeticError("degree-8 image rank for E8 did not stabilize at 1")
    axes = [rep.samples[i] for i in rep.spanning]
    table = zonal_coefficient_table("E8", axes, [8], m_max, rep.route)
    rows = []
    for m in range(1, m_max + 1):
        member = all(table[(i, 8)][m] == 0 for i in range(len(axes)))
        rows.append(EquivalenceRow(m, t[m], member, member == (t[m] == 0)))
    return rows


def primes_upto(n: int) -> list[int]:
    if n < 2:
        return []
    sieve = np.ones(n + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, int(n ** 0.5) + 1):
        if sieve[p]:
            sieve[p * p::p] = False
    return [int(p) for p in np.nonzero(sieve)[0]]


@dataclass
class CongruenceRow:
    p: int
    tau2: int
    mod3_ok: bool
    mod5_ok: bool
    d8_value: int | None = None      # a_{D8,P4}(p) when computed
    d8_ok: bool | None = None


def congruence_certificate(p_max: int = 10_000, d8_prime_max: int = 7) -> list[CongruenceRow]:
    """tau_2(p) = p(p+1) mod 3 and mod 5 for odd primes p <= p_max.

    For p <= d8_prime_max the D8 route 896 tau_2(p) = a_{D8,P4}(p) is also
    evaluated by enumeration.
    """
    if p_max < 3:
        raise ValueError("p_max must be at least 3")
    t2 = qseries.tau2(p_max)
    P4 = p4_polynomial(8)
    rows = []
    for p in primes_upto(p_max):
        if p == 2:
            continue
        v = t2[p]
        row = CongruenceRow(p, v, (v - p * (p + 1)) % 3 == 0, (v - p * (p + 1)) % 5 == 0)
        if p <= d8_prime_max:
            a = polynomial_sums([P4], enumerate_shell("D8", 2 * p).points)[0]
            row.d8_value = int(a)
            row.d8_ok = a == 896 * v
        rows.append(row)
    return rows


@dataclass
class PrimeVerdict:
    p: int
    certified: bool          # nonvanishing follows from the mod-15 congruence
    tau2: int
    nonzero: bool


def prime_nonvanishing_region(p_max: int) -> list[PrimeVerdict]:
    """Primes p <= p_max other than 2, 3, 5: certified iff p(p+1) is not 0 mod 15."""
    t2 = qseries.tau2(max(p_max, 1))
    out = []
    for p in primes_upto(p_max):
        if p in (2, 3, 5):
            continue
        certified = (p * (p + 1)) % 15 != 0
        out.append(PrimeVerdict(p, certified, t2[p], t2[p] != 0))
    return out


def convolution_criteria(m_max: int = 10_000) -> tuple[ScanResult, ScanResult]:
    """Zeros of sum tau(n) tau(m-n) (degree 12, Leech) and of the tau_2 analogue (degree 8, BW16)."""
    t = qseries.tau(m_max)
    t2 = qseries.tau2(m_max)
    out = []
    for name, seq in (("leech-tau-convolution", t), ("bw16-tau2-convolution", t2)):
        vals = qseries.convolution_scan(seq, seq, m_max)
        zeros = [m for m, v in vals if v == 0]
        out.append(ScanResult(name, 2, m_max, zeros, {"first": [[m, str(v)] for m, v in vals[:5]]}))
    return out[0], out[1]


@dataclass
class TwoDimRow:
    lattice: str
    m: int
    computed: frozenset
    predicted: frozenset

    @property
    def ok(self) -> bool:
        return self.computed == self.predicted


def predicted_two_dim(lattice: str, L: int) -> frozenset:
    if lattice == "Z2":
        return frozenset(2 * k for k in range(1, L // 2 + 1) if k % 2 == 1)
    if lattice == "A2":
        return frozenset(2 * k for k in range(1, L // 2 + 1) if k % 3 != 0)
    raise ValueError(f"no closed form for {lattice}")


def two_dim_strength_check(lattice: str, m_max: int = 500, L: int = 20) -> list[TwoDimRow]:
    """Computed strength of every nonempty shell vs the closed form."""
    spec = get_lattice(lattice)
    if spec.name not in ("Z2", "A2"):
        raise ValueError("two-dimensional check covers Z2 and A2")
    tables = coefficient_tables(spec, L, m_max)
    pred = predicted_two_dim(spec.name, L)
    _prewarm_emptiness(spec, m_max)
    rows = []
    for m in range(1, m_max + 1):
        if shell_is_empty(spec, m):
            continue
        rep = _verdicts(spec.name, m, L, tables)
        rows.append(TwoDimRow(spec.name, m, rep.member_degrees, pred))
    return rows


# ---------------------------------------------------------------------------
# tau_2 nonvanishing scan

SCAN_PRIMES = (2147483647, 2147483629, 2147483587, 2147483579, 2147483563)


def _deligne_bound(m: int) -> int:
    """|tau_2(m)| <= d(m) m^(7/2) < d(m) * ceil(m^(7/2))."""
    from math import isqrt
    d = sum(2 if i * i != m else 1 for i in range(1, isqrt(m) + 1) if m % i == 0)
    return d * (isqrt(m ** 7) + 1)


def tau2_nonvanishing_scan(m_max: int = 1_000_000, checkpoint: str | Path | None = None) -> ScanResult:
    """Positions m <= m_max with tau_2(m) = 0.

    tau_2 is reduced modulo large primes; a nonzero residue proves
    nonvanishing.  Positions that are zero modulo several primes whose
    product exceeds twice the Deligne bound are genuine zeros.  With a
    checkpoint file, the candidate list after each prime is saved and a rerun
    resumes from it.
    """
    path = Path(checkpoint) if checkpoint else None
    state = {"m_max": m_max, "primes_done": [], "candidates": None}
    if path is not None and path.exists():
        saved = json.loads(path.read_text())
        if saved.get("m_max") == m_max:
            state = saved
    cand = state["candidates"]
    for p in SCAN_PRIMES:
        if p in state["primes_done"]:
            continue
        if cand is not None and not cand:
            break
        res = qseries.eta_product_residues({1: 8, 2: 8}, m_max, p)   # res[m-1] = tau_2(m) mod p
        zeros = (np.nonzero(res == 0)[0] + 1).tolist()
        cand = zeros if cand is None else [m for m in cand if m in set(zeros)]
        state["primes_done"].append(p)
        state["candidates"] = cand
        if path is not None:
            path.write_text(json.dumps(state))
    confirmed, open_ = [], []
    prod = 1
    for p in state["primes_done"]:
        prod *= p
    for m in cand or []:
        (confirmed if prod > 2 * _deligne_bound(m) else open_).append(m)
    if open_:
        # fall back to exact coefficients for anything the residues cannot settle
        t2 = qseries.tau2(max(open_))
        confirmed.extend(m for m in open_ if t2[m] == 0)
    return ScanResult("tau2-nonvanishing", 1, m_max, sorted(confirmed),
                      {"primes": state["primes_done"]})
