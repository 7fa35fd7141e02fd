"""
Exact formal q-series.

Coefficients are Python integers (or Fractions); nothing here touches floating
point.  Fractional leading exponents are tracked as an integer number of
q^(1/24) steps, which covers every eta quotient used in the package.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Iterator, Sequence

import numpy as np


class OffsetMismatch(ValueError):
    pass


@dataclass(frozen=True)
class QSeries:
    """q^(offset24/24) * sum_i coeffs[i] q^i, known for i < precision."""

    offset24: int
    coeffs: tuple

    def __post_init__(self):
        if not isinstance(self.coeffs, tuple):
            object.__setattr__(self, "coeffs", tuple(self.coeffs))

    @property
    def precision(self) -> int:
        return len(self.coeffs)

    def __len__(self):
        return len(self.coeffs)

    def __getitem__(self, i):
        return self.coeffs[i]

    def __iter__(self) -> Iterator:
        return iter(self.coeffs)

    def __repr__(self):
        head = ", ".join(str(c) for c in self.coeffs[:8])
        more = ", ..." if self.precision > 8 else ""
        return f"QSeries(offset24={self.offset24}, [{head}{more}], prec={self.precision})"

    # -- construction helpers ------------------------------------------

    @classmethod
    def one(cls, precision: int) -> "QSeries":
        return cls(0, (1,) + (0,) * (precision - 1))

    @classmethod
    def from_sparse(cls, terms: Iterable[tuple[int, int]], precision: int, offset24: int = 0):
        out = [0] * precision
        for e, c in terms:
            if e < precision:
                out[e] += c
        return cls(offset24, tuple(out))

    def truncate(self, precision: int) -> "QSeries":
        if precision > self.precision:
            raise ValueError(
                f"cannot extend precision {self.precision} to {precision}")
        return QSeries(self.offset24, self.coeffs[:precision])

    def nonzero_terms(self) -> list[tuple[int, object]]:
        return [(i, c) for i, c in enumerate(self.coeffs) if c]

    def substitute(self, scale: int) -> "QSeries":
        """q -> q^scale.  Known coefficients stay known up to precision*scale."""
        if scale < 1:
            raise ValueError("scale must be positive")
        out = [0] * (self.precision * scale)
        out[::scale] = self.coeffs
        return QSeries(self.offset24 * scale, tuple(out))

    # -- arithmetic -----------------------------------------------------

    def _aligned(self, other: "QSeries"):
        diff = other.offset24 - self.offset24
        if diff % 24:
            raise OffsetMismatch(
                f"offsets {self.offset24}/24 and {other.offset24}/24 differ by a fractional power")
        shift = diff // 24
        if shift >= 0:
            lo, a, b, s = self, self.coeffs, other.coeffs, shift
        else:
            lo, a, b, s = other, other.coeffs, self.coeffs, -shift
        prec = min(len(a), len(b) + s)
        return lo.offset24, a, b, s, prec, shift >= 0

    def __add__(self, other):
        if not isinstance(other, QSeries):
            return NotImplemented
        off, a, b, s, prec, _ = self._aligned(other)
        out = list(a[:prec])
        for i in range(s, prec):
            out[i] += b[i - s]
        return QSeries(off, tuple(out))

    def __neg__(self):
        return QSeries(self.offset24, tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        if not isinstance(other, QSeries):
            return NotImplemented
        return self + (-other)

    def scale(self, c) -> "QSeries":
        return QSeries(self.offset24, tuple(c * x for x in self.coeffs))

    def __rmul__(self, c):
        if isinstance(c, (int, Rational)):
            return self.scale(c)
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, QSeries):
            return mul(self, other)
        if isinstance(other, (int, Rational)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, e: int):
        return power(self, e)

    def __eq__(self, other):
        if not isinstance(other, QSeries):
            return NotImplemented
        return self.offset24 == other.offset24 and self.coeffs == other.coeffs

    __hash__ = None

    # -- export ---------------------------------------------------------

    def to_json(self) -> dict:
        return {"offset24": self.offset24, "coeffs": [str(c) for c in self.coeffs]}

    @classmethod
    def from_json(cls, data) -> "QSeries":
        if isinstance(data, str):
            data = json.loads(data)
        coeffs = []
        for s in data["coeffs"]:
            coeffs.append(Fraction(s) if "/" in s else int(s))
        return cls(int(data["offset24"]), tuple(coeffs))


def _as_objects(seq: Sequence, n: int) -> np.ndarray:
    arr = np.empty(n, dtype=object)
    arr[:] = 0
    k = min(n, len(seq))
    arr[:k] = list(seq[:k])
    return arr


def _cauchy(a: Sequence, b: Sequence, n: int) -> list:
    """First n coefficients of the product of two coefficient lists."""
    na = sum(1 for c in a[:n] if c)
    nb = sum(1 for c in b[:n] if c)
    if na > nb:
        a, b = b, a
    dense = _as_objects(b, n)
    out = _as_objects((), n)
    for i, c in enumerate(a[:n]):
        if c:
            out[i:] += c * dense[: n - i]
    return out.tolist()


def mul(a: QSeries, b: QSeries) -> QSeries:
    """Truncated Cauchy product; the result is known to min(a.prec, b.prec)."""
    n = min(a.precision, b.precision)
    return QSeries(a.offset24 + b.offset24, tuple(_cauchy(a.coeffs, b.coeffs, n)))


def power(a: QSeries, e: int) -> QSeries:
    if e < 0:
        raise ValueError("negative exponents are not supported")
    result = QSeries.one(a.precision)
    base = a
    while e:
        if e & 1:
            result = mul(result, base)
        e >>= 1
        if e:
            base = mul(base, base)
    return result


# ---------------------------------------------------------------------------
# eta products


def pentagonal_terms(n: int) -> Iterator[tuple[int, int]]:
    """Nonzero terms of prod(1 - q^k) below q^n, by the pentagonal number theorem."""
    yield 0, 1
    k = 1
    while True:
        e1 = k * (3 * k - 1) // 2
        if e1 >= n:
            break
        sign = -1 if k % 2 else 1
        yield e1, sign
        e2 = k * (3 * k + 1) // 2
        if e2 < n:
            yield e2, sign
        k += 1


def cube_terms(n: int) -> Iterator[tuple[int, int]]:
    """Nonzero terms of prod(1 - q^k)^3 below q^n (Jacobi's identity)."""
    k = 0
    while k * (k + 1) // 2 < n:
        yield k * (k + 1) // 2, (-1) ** k * (2 * k + 1)
        k += 1


def _sparse_factors(factors: dict[int, int], n: int) -> list[list[tuple[int, int]]]:
    out = []
    for s, e in sorted(factors.items()):
        if e < 0:
            raise ValueError("only holomorphic eta products (nonnegative exponents) are supported")
        cubes, rest = divmod(e, 3)
        scaled3 = [(s * i, c) for i, c in cube_terms((n + s - 1) // s)]
        scaled1 = [(s * i, c) for i, c in pentagonal_terms((n + s - 1) // s)]
        out.extend([scaled3] * cubes)
        out.extend([scaled1] * rest)
    return out


def eta(scale: int, precision: int) -> QSeries:
    """eta(scale*z) = q^(scale/24) prod(1 - q^(scale*n)), `precision` coefficients."""
    if precision < 1:
        raise ValueError("precision must be at least 1")
    if scale < 1:
        raise ValueError("scale must be positive")
    terms = ((scale * i, c) for i, c in pentagonal_terms((precision + scale - 1) // scale))
    return QSeries.from_sparse(terms, precision, offset24=scale)


def eta_product(factors: dict[int, int], precision: int) -> QSeries:
    """prod_s eta(s z)^(e_s), expanded as a chain of sparse multiplications.

    Each eta power is split into cubes (Jacobi) and single factors (Euler), so
    the cost is about precision * sqrt(precision) per factor instead of a dense
    product.
    """
    if precision < 1:
        raise ValueError("precision must be at least 1")
    offset = sum(s * e for s, e in factors.items())
    out = _as_objects((1,), precision)
    for terms in _sparse_factors(factors, precision):
        acc = _as_objects((), precision)
        for e, c in terms:
            acc[e:] += c * out[: precision - e]
        out = acc
    return QSeries(offset, tuple(out.tolist()))


def eta_product_residues(factors: dict[int, int], precision: int, modulus: int) -> np.ndarray:
    """Coefficients of an eta product reduced mod `modulus` (int64, values in [0, modulus)).

    Same sparse chain as `eta_product`; partial sums are reduced once per
    factor, which is safe while modulus < 2**31 and precision < 2**22.
    """
    if not 2 <= modulus < 2**31:
        raise ValueError("modulus must lie in [2, 2**31)")
    if precision >= 2**22:
        raise ValueError("precision too large for single-pass int64 accumulation")
    out = np.zeros(precision, dtype=np.int64)
    out[0] = 1
    tmp = np.empty(precision, dtype=np.int64)
    for terms in _sparse_factors(factors, precision):
        acc = np.zeros(precision, dtype=np.int64)
        for e, c in terms:
            k = precision - e
            np.multiply(out[:k], c, out=tmp[:k])
            acc[e:] += tmp[:k]
        np.remainder(acc, modulus, out=acc)
        out = acc
    return out


def tau(up_to: int) -> list[int]:
    """Coefficients of eta(z)^24; entry m is tau(m), entry 0 is 0."""
    s = eta_product({1: 24}, up_to)
    return [0] + list(s.coeffs[:up_to])


def tau2(up_to: int) -> list[int]:
    """Coefficients of eta(z)^8 eta(2z)^8; entry m is tau_2(m), entry 0 is 0."""
    s = eta_product({1: 8, 2: 8}, up_to)
    return [0] + list(s.coeffs[:up_to])


# ---------------------------------------------------------------------------
# divisor sums and Eisenstein series


@dataclass(frozen=True)
class DivisorSumTable:
    k: int
    up_to: int
    values: tuple  # values[m] = sigma_k(m), values[0] = 0

    def __getitem__(self, m):
        return self.values[m]


def divisor_sums(k: int, up_to: int) -> DivisorSumTable:
    vals = _as_objects((), up_to + 1)
    for d in range(1, up_to + 1):
        vals[d::d] += d ** k
    return DivisorSumTable(k, up_to, tuple(vals.tolist()))


def sigma_naive(k: int, m: int) -> int:
    return sum(d ** k for d in range(1, m + 1) if m % d == 0)


_EISENSTEIN = {2: (1, -24), 4: (3, 240), 6: (5, -504)}


def eisenstein(weight: int, scale: int, precision: int) -> QSeries:
    """Normalised Eisenstein series E_k(scale*z) for k in {2, 4, 6}.

    E_2 is only quasi-modular; it is provided as a building block for the
    level-2 form 2E_2(2z) - E_2(z) and should not be used on its own as a
    modular form.
    """
    if weight not in _EISENSTEIN:
        raise ValueError(f"unsupported Eisenstein weight {weight}")
    if precision < 1:
        raise ValueError("precision must be at least 1")
    k, c = _EISENSTEIN[weight]
    base_prec = (precision + scale - 1) // scale
    sig = divisor_sums(k, base_prec)
    coeffs = [1] + [c * sig[m] for m in range(1, base_prec)]
    return QSeries(0, tuple(coeffs)).substitute(scale).truncate(precision)


def convolution_scan(a: Sequence[int], b: Sequence[int], m_max: int) -> list[tuple[int, int]]:
    """[(m, sum_{n=1}^{m-1} a[n] b[m-n]) for m = 2..m_max].

    `a` and `b` are coefficient sequences indexed by n (entry 0 is ignored), so
    both need length at least m_max.
    """
    if len(a) < m_max or len(b) < m_max:
        raise ValueError(f"need sequences of length >= {m_max} (indexed from 0)")
    A = _as_objects(a, m_max)
    B = _as_objects(b, m_max)
    out = []
    for m in range(2, m_max + 1):
        out.append((m, int(np.dot(A[1:m], B[m - 1:0:-1]))))
    return out
