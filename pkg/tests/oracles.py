"""
Slow, obviously-correct reference computations.

Nothing here imports the package: each function recomputes its quantity from
the definition (dense products, box enumeration, sympy calculus) so tests
can compare against it.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from math import isqrt

import sympy


def naive_product(factors: dict[int, int], n: int) -> list[int]:
    """Coefficients q^0..q^(n-1) of prod_s prod_k (1 - q^(s k))^e_s, by dense multiplication."""
    out = [1] + [0] * (n - 1)
    for s, e in factors.items():
        for _ in range(e):
            for k in range(1, n):
                step = s * k
                if step >= n:
                    break
                # multiply by (1 - q^step)
                for i in range(n - 1, step - 1, -1):
                    out[i] -= out[i - step]
    return out


def naive_tau(n: int) -> list[int]:
    """[0, tau(1), ..., tau(n)]."""
    c = naive_product({1: 24}, n)
    return [0] + c[:n]


def naive_tau2(n: int) -> list[int]:
    c = naive_product({1: 8, 2: 8}, n)
    return [0] + c[:n]


def sigma(k: int, m: int) -> int:
    return sum(d ** k for d in range(1, m + 1) if m % d == 0)


def box_shell(dim: int, norm: int, keep=lambda v: True) -> list[tuple[int, ...]]:
    """All integer vectors of squared norm `norm` passing `keep`, by scanning a box."""
    r = isqrt(norm)
    return [v for v in itertools.product(range(-r, r + 1), repeat=dim)
            if sum(x * x for x in v) == norm and keep(v)]


def d_shell(dim: int, two_m: int) -> list[tuple[int, ...]]:
    return box_shell(dim, two_m, lambda v: sum(v) % 2 == 0)


def e8_shell_doubled(two_m: int) -> list[tuple[int, ...]]:
    """E8 shell in doubled coordinates: D8 points times 2, plus D8 + (1/2)^8 times 2."""
    even = [tuple(2 * x for x in v) for v in d_shell(8, two_m)]
    r = isqrt(4 * two_m)
    odds = [x for x in range(-r, r + 1) if x % 2]
    odd = [v for v in itertools.product(odds, repeat=8)
           if sum(x * x for x in v) == 4 * two_m and sum(v) % 4 == 0]
    return even + odd


def gram_shell(gram, norm: int, box: int) -> list[tuple[int, ...]]:
    dim = len(gram)
    out = []
    for v in itertools.product(range(-box, box + 1), repeat=dim):
        n = sum(v[i] * gram[i][j] * v[j] for i in range(dim) for j in range(dim))
        if n == norm:
            out.append(v)
    return out


def sympy_laplacian(expr, syms):
    return sympy.expand(sum(sympy.diff(expr, s, 2) for s in syms))


def sympy_gegenbauer(d: int, n: int) -> list[Fraction]:
    """Coefficients (constant first) of the Gegenbauer polynomial with index (d-2)/2."""
    t = sympy.Symbol("t")
    if d == 2:
        p = sympy.chebyshevt(n, t)
    else:
        p = sympy.gegenbauer(n, sympy.Rational(d - 2, 2), t)
    poly = sympy.Poly(sympy.expand(p), t)
    coeffs = [Fraction(0)] * (n + 1)
    for (k,), c in poly.terms():
        coeffs[k] = Fraction(int(c.p), int(c.q))
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs


def sphere_moment_integral(alpha) -> Fraction:
    """Sphere average of x^alpha via Gaussian moments: E[x^a] over N(0,1)^d divided by E[r^|a|]."""
    d = len(alpha)
    if any(a % 2 for a in alpha):
        return Fraction(0)
    gauss = 1
    for a in alpha:
        gauss *= sympy.factorial2(a - 1) if a else 1
    k = sum(alpha)
    # E[r^k] for chi distribution with d degrees of freedom, k even
    r_moment = 1
    for j in range(k // 2):
        r_moment *= d + 2 * j
    return Fraction(int(gauss), int(r_moment))


def binomial_fisher(d: int, t: int) -> int:
    from math import comb
    e = t // 2
    if t % 2 == 0:
        return comb(d + e - 1, e) + comb(d + e - 2, e - 1)
    return 2 * comb(d + e - 1, e)


def triangle_oracle(theta1, theta2, L: int) -> set[int]:
    """Degrees l <= L where 1 + e^{i l t1} + e^{i l t2} = 0, with sympy's exact trig."""
    out = set()
    for l in range(1, L + 1):
        z = 1 + sympy.exp(sympy.I * l * sympy.pi * sympy.Rational(theta1)) \
            + sympy.exp(sympy.I * l * sympy.pi * sympy.Rational(theta2))
        if sympy.simplify(sympy.expand_complex(z)) == 0:
            out.add(l)
    return out


def brute_kernel(points, poly_coeffs) -> Fraction:
    """sum over all ordered pairs of C(<x,y>/|x|^2), pair by pair."""
    rho2 = sum(v * v for v in points[0])
    total = Fraction(0)
    for x in points:
        for y in points:
            t = Fraction(sum(a * b for a, b in zip(x, y)), rho2)
            total += sum(c * t ** i for i, c in enumerate(poly_coeffs))
    return total
