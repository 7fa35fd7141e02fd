"""
Lattice registry and exact shell enumeration.

Coordinate lattices (Z^n, D_n, E8) store points as integer vectors scaled by
`scale_denom`; E8 is held in doubled coordinates so that the half-integral
coset stays integral.  Gram lattices (A2, E6) store coefficient vectors with
respect to a basis whose Gram matrix is integral.
"""

from __future__ import annotations

import csv
import io
import os
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import isqrt
from pathlib import Path
from typing import Callable, Iterator, NamedTuple, Sequence

import numpy as np

from .qseries import divisor_sums


class UnknownLattice(KeyError):
    pass


class UnsupportedLattice(ValueError):
    pass


@dataclass(frozen=True)
class LatticeSpec:
    name: str
    dim: int
    model: str  # "coordinate" | "gram" | "coefficients-only"
    scale_denom: int = 1
    level: int | None = None
    even: bool = True
    gram: tuple | None = None
    description: str = ""

    @property
    def gram_matrix(self) -> np.ndarray:
        if self.gram is None:
            return np.eye(self.dim, dtype=np.int64)
        return np.array(self.gram, dtype=np.int64)

    def inner(self, X: np.ndarray, y: Sequence) -> np.ndarray:
        """Scaled inner products X G y (true value divided by scale_denom)."""
        G = self.gram_matrix
        return np.asarray(X, dtype=np.int64) @ (G @ np.asarray(y, dtype=np.int64))

    def axis_norm(self, y: Sequence) -> int:
        y = np.asarray(y, dtype=object)
        G = self.gram_matrix.astype(object)
        return int(y @ G @ y)

    def contains(self, coords: Sequence[int]) -> bool:
        """Membership test for scaled coordinates."""
        x = [int(v) for v in coords]
        if len(x) != self.dim:
            return False
        if self.model == "gram":
            return True
        if self.name.startswith("Z"):
            return True
        if self.name.startswith("D"):
            return sum(x) % 2 == 0
        if self.name == "E8":
            par = {v % 2 for v in x}
            return len(par) == 1 and sum(x) % 4 == 0
        raise UnsupportedLattice(self.name)


A2_GRAM = ((2, -1), (-1, 2))
E6_CARTAN = (
    (2, -1, 0, 0, 0, 0),
    (-1, 2, -1, 0, 0, 0),
    (0, -1, 2, -1, 0, -1),
    (0, 0, -1, 2, -1, 0),
    (0, 0, 0, -1, 2, 0),
    (0, 0, -1, 0, 0, 2),
)

REGISTRY: dict[str, LatticeSpec] = {
    "Z2": LatticeSpec("Z2", 2, "coordinate", 1, None, False, description="square lattice"),
    "D4": LatticeSpec("D4", 4, "coordinate", 1, 2),
    "D6": LatticeSpec("D6", 6, "coordinate", 1, 4),
    "D8": LatticeSpec("D8", 8, "coordinate", 1, 2),
    "E8": LatticeSpec("E8", 8, "coordinate", 2, 1, description="doubled coordinates"),
    "A2": LatticeSpec("A2", 2, "gram", 1, 3, gram=A2_GRAM),
    "E6": LatticeSpec("E6", 6, "gram", 1, 3, gram=E6_CARTAN),
    "Leech": LatticeSpec("Leech", 24, "coefficients-only", 1, 1),
    "BW16": LatticeSpec("BW16", 16, "coefficients-only", 1, 2),
}


def get_lattice(name) -> LatticeSpec:
    if isinstance(name, LatticeSpec):
        return name
    try:
        return REGISTRY[name]
    except KeyError:
        raise UnknownLattice(f"unknown lattice {name!r}; known: {', '.join(REGISTRY)}") from None


class ShellPoint(NamedTuple):
    coords: tuple
    norm2_scaled: int


@dataclass(frozen=True)
class Shell:
    lattice: LatticeSpec
    two_m: int
    points: np.ndarray = field(repr=False)

    def __len__(self):
        return len(self.points)

    def __iter__(self) -> Iterator[ShellPoint]:
        n2 = self.norm2_scaled
        for row in self.points:
            yield ShellPoint(tuple(int(v) for v in row), n2)

    @property
    def norm2_scaled(self) -> int:
        return self.two_m * self.lattice.scale_denom ** 2

    def is_antipodal(self) -> bool:
        return _row_set(self.points) == _row_set(-self.points)


def _row_set(arr: np.ndarray) -> set:
    return set(map(tuple, np.asarray(arr).tolist()))


# ---------------------------------------------------------------------------
# coordinate enumeration


@lru_cache(maxsize=64)
def _norm_table(d: int, n_max: int, parity: int | None) -> tuple:
    """All d-vectors of exact norm n for n <= n_max, bucketed by n.

    `parity` restricts every coordinate to that parity (None: any integer).
    Built recursively by splitting the coordinates in two halves.
    """
    if d == 1:
        buckets = [[] for _ in range(n_max + 1)]
        r = isqrt(n_max)
        for v in range(-r, r + 1):
            if parity is None or v % 2 == parity:
                buckets[v * v].append((v,))
        return tuple(np.array(b, dtype=np.int16).reshape(-1, 1) for b in buckets)
    a = d // 2
    left = _norm_table(a, n_max, parity)
    right = _norm_table(d - a, n_max, parity)
    return tuple(_combine(left, right, n) for n in range(n_max + 1))


def _combine(left, right, n: int) -> np.ndarray:
    parts = []
    for n1 in range(n + 1):
        A, B = left[n1], right[n - n1]
        if len(A) and len(B):
            parts.append(np.hstack([np.repeat(A, len(B), axis=0), np.tile(B, (len(A), 1))]))
    if not parts:
        width = left[0].shape[1] + right[0].shape[1]
        return np.zeros((0, width), dtype=np.int16)
    return np.vstack(parts)


def vectors_of_norm(d: int, n: int, parity: int | None = None) -> np.ndarray:
    """Integer d-vectors with sum of squares n (coordinates of one parity if given)."""
    if d == 1:
        return _norm_table(1, n, parity)[n]
    a = d // 2
    return _combine(_norm_table(a, n, parity), _norm_table(d - a, n, parity), n)


def _lex_sorted(points: np.ndarray) -> np.ndarray:
    if len(points) == 0:
        return points
    keys = tuple(points[:, i] for i in reversed(range(points.shape[1])))
    return points[np.lexsort(keys)]


# ---------------------------------------------------------------------------
# Gram enumeration (Fincke-Pohst on an exact LDL^T decomposition)


@lru_cache(maxsize=None)
def _ldl(gram: tuple) -> tuple[list[Fraction], list[list[Fraction]]]:
    """q(x) = sum_i D_i (x_i + sum_{j>i} mu[i][j] x_j)^2, exactly."""
    n = len(gram)
    A = [[Fraction(v) for v in row] for row in gram]
    D = [Fraction(0)] * n
    mu = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        D[i] = A[i][i] - sum(D[k] * mu[k][i] ** 2 for k in range(i))
        if D[i] <= 0:
            raise ValueError("Gram matrix is not positive definite")
        for j in range(i + 1, n):
            mu[i][j] = (A[i][j] - sum(D[k] * mu[k][i] * mu[k][j] for k in range(i))) / D[i]
    return D, mu


def fincke_pohst(gram: Sequence[Sequence[int]], bound: int, exact: bool = False) -> np.ndarray:
    """All nonzero integer x with x^T G x <= bound (== bound if `exact`)."""
    gram = tuple(tuple(int(v) for v in row) for row in gram)
    n = len(gram)
    D, mu = _ldl(gram)
    G = np.array(gram, dtype=np.int64)
    out = []
    x = [0] * n

    # Work from the last coordinate down; q = sum_i D_i (x_i + sum_{j>i} mu_ij x_j)^2.
    def search(i: int, remaining: Fraction):
        c = -sum((mu[i][j] * x[j] for j in range(i + 1, n)), Fraction(0))
        r2 = remaining / D[i]
        s = isqrt(r2.numerator // r2.denominator) + 1
        lo = (c - s).__floor__()
        hi = (c + s).__ceil__()
        for v in range(lo, hi + 1):
            part = D[i] * (v - c) ** 2
            if part > remaining:
                continue
            x[i] = v
            if i == 0:
                out.append(tuple(x))
            else:
                search(i - 1, remaining - part)
        x[i] = 0

    search(n - 1, Fraction(bound))
    pts = np.array(out, dtype=np.int64).reshape(-1, n)
    norms = np.einsum("ij,jk,ik->i", pts, G, pts)
    keep = (norms > 0) & ((norms == bound) if exact else (norms <= bound))
    return pts[keep]


# ---------------------------------------------------------------------------
# public enumeration


_SHELL_CACHE: dict[tuple[str, int], Shell] = {}


def _cache_dir() -> Path | None:
    root = os.environ.get("SHELLSTRENGTH_CACHE")
    return Path(root) if root else None


def enumerate_shell(lattice, two_m: int) -> Shell:
    """Complete, duplicate-free, lexicographically ordered shell of squared norm two_m."""
    spec = get_lattice(lattice)
    if spec.model == "coefficients-only":
        raise UnsupportedLattice(f"{spec.name} is registered for coefficient-level work only")
    if two_m < 1:
        raise ValueError("two_m must be positive")
    key = (spec.name, two_m)
    if key in _SHELL_CACHE:
        return _SHELL_CACHE[key]
    cdir = _cache_dir()
    cfile = cdir / f"shell_{spec.name}_{two_m}.npy" if cdir else None
    if cfile is not None and cfile.exists():
        pts = np.load(cfile)
    else:
        pts = _enumerate(spec, two_m)
        if cfile is not None:
            cdir.mkdir(parents=True, exist_ok=True)
            np.save(cfile, pts)
    shell = Shell(spec, two_m, pts)
    _SHELL_CACHE[key] = shell
    return shell


def clear_cache():
    _SHELL_CACHE.clear()
    _norm_table.cache_clear()


def _enumerate(spec: LatticeSpec, two_m: int) -> np.ndarray:
    if spec.even and two_m % 2:
        return np.zeros((0, spec.dim), dtype=np.int16)
    if spec.model == "gram":
        pts = fincke_pohst(spec.gram, two_m, exact=True)
    elif spec.name.startswith("Z"):
        pts = vectors_of_norm(spec.dim, two_m)
    elif spec.name.startswith("D"):
        # even norm forces an even coordinate sum, so Z^n and D_n shells agree
        pts = vectors_of_norm(spec.dim, two_m)
        pts = pts[pts.astype(np.int64).sum(axis=1) % 2 == 0]
    elif spec.name == "E8":
        n4 = 4 * two_m
        even = 2 * vectors_of_norm(8, two_m)
        odd = vectors_of_norm(8, n4, parity=1)
        pts = np.vstack([even, odd])
        pts = pts[pts.astype(np.int64).sum(axis=1) % 4 == 0]
    else:
        raise UnsupportedLattice(spec.name)
    return _lex_sorted(np.ascontiguousarray(pts))


def shell_size(lattice, two_m: int) -> int:
    """Number of shell points, counted without storing them for coordinate lattices."""
    spec = get_lattice(lattice)
    if spec.model == "gram":
        return len(enumerate_shell(spec, two_m))
    if spec.even and two_m % 2:
        return 0
    if spec.name.startswith("Z") or spec.name.startswith("D"):
        return _count_by_halves(spec.dim, two_m, None, 1)
    if spec.name == "E8":
        return _count_by_halves(8, two_m, 0, 4, doubled=True) + _count_by_halves(8, 4 * two_m, 1, 4)
    raise UnsupportedLattice(spec.name)


def _count_by_halves(d: int, n: int, parity, modulus: int, doubled: bool = False) -> int:
    """Count d-vectors of norm n whose coordinate sum is 0 mod `modulus` by pairing half-vectors."""
    if doubled:
        # all-even doubled vectors 2y with |y|^2 = n: sum(2y) = 0 mod 4 <=> sum(y) even
        return _count_by_halves(d, n, None, 2)
    a = d // 2
    left = _norm_table(a, n, parity)
    right = _norm_table(d - a, n, parity)
    total = 0
    for n1 in range(n + 1):
        A, B = left[n1], right[n - n1]
        if not len(A) or not len(B):
            continue
        ra = np.bincount(A.astype(np.int64).sum(axis=1) % modulus, minlength=modulus)
        rb = np.bincount(B.astype(np.int64).sum(axis=1) % modulus, minlength=modulus)
        total += sum(int(ra[i]) * int(rb[(-i) % modulus]) for i in range(modulus))
    return total


# ---------------------------------------------------------------------------
# closed forms and inner products


def shell_count_formula(lattice, m: int) -> int:
    """|Lambda_{2m}| from divisor sums (D4: Jacobi four squares, D8: eight squares, E8: 240 sigma_3)."""
    name = get_lattice(lattice).name
    if m < 1:
        raise ValueError("m must be positive")
    divs = [d for d in range(1, 2 * m + 1) if (2 * m) % d == 0]
    if name == "D4":
        return 12 * sum((1 - (-1) ** d) * d for d in divs)
    if name == "D8":
        return 16 * sum((-1) ** d * d ** 3 for d in divs)
    if name == "E8":
        return 240 * divisor_sums(3, m)[m]
    raise UnsupportedLattice(f"no closed-form shell count for {name}")


def normalized_inner_products(shell: Shell, points: np.ndarray | None = None) -> set[Fraction]:
    """{<x,y>/<x,x> : x != y} over the shell (or a subset of its rows)."""
    pts = shell.points if points is None else points
    if len(pts) == 0:
        raise ValueError("empty point set")
    P = np.asarray(pts, dtype=np.int64)
    G = P @ shell.lattice.gram_matrix @ P.T
    n = len(P)
    vals = np.unique(G[~np.eye(n, dtype=bool)]) if n > 1 else np.array([], dtype=np.int64)
    n2 = shell.norm2_scaled
    return {Fraction(int(v), n2) for v in vals}


def signed_permutation_group_element(spec: LatticeSpec, rng) -> tuple[list[int], list[int]]:
    """A random signed permutation preserving a coordinate lattice.

    Z^n and D_n admit every sign pattern; E8 needs an even number of sign
    changes.
    """
    if spec.model != "coordinate":
        raise UnsupportedLattice("signed permutations apply to coordinate lattices only")
    perm = list(rng.permutation(spec.dim))
    signs = list(rng.choice([-1, 1], size=spec.dim))
    if spec.name == "E8" and signs.count(-1) % 2:
        signs[0] = -signs[0]
    return [int(p) for p in perm], [int(s) for s in signs]


def apply_signed_permutation(points: np.ndarray, perm: Sequence[int], signs: Sequence[int]) -> np.ndarray:
    """Rows x -> sigma(x) with sigma(x)_{perm[i]} = signs[i] * x_i."""
    out = np.empty_like(points)
    for i, (p, s) in enumerate(zip(perm, signs)):
        out[:, p] = s * points[:, i]
    return out


# ---------------------------------------------------------------------------
# CSV export


def shell_to_csv(shell: Shell, path=None) -> str:
    buf = io.StringIO()
    spec = shell.lattice
    buf.write(f"# lattice={spec.name} model={spec.model} scale_denom={spec.scale_denom} "
              f"two_m={shell.two_m}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow([f"x{i + 1}" for i in range(spec.dim)])
    for row in shell.points.tolist():
        w.writerow(row)
    text = buf.getvalue()
    if path is not None:
        Path(path).write_text(text)
    return text


def read_shell_csv(path_or_text) -> tuple[dict, np.ndarray]:
    """Returns (header fields, integer point array)."""
    text = str(path_or_text)
    if "\n" not in text and Path(text).exists():
        text = Path(text).read_text()
    lines = text.splitlines()
    if not lines or not lines[0].startswith("#"):
        raise ValueError("missing '# lattice=... scale_denom=... two_m=...' header")
    header = dict(tok.split("=", 1) for tok in lines[0][1:].split())
    rows = list(csv.reader(lines[2:]))
    pts = np.array([[int(v) for v in r] for r in rows if r], dtype=np.int64)
    if pts.size == 0:
        pts = pts.reshape(0, len(lines[1].split(",")))
    header["scale_denom"] = int(header.get("scale_denom", 1))
    header["two_m"] = int(header["two_m"])
    return header, pts
