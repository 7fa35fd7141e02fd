from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import given, settings, strategies as st

from shellstrength.harmonics import (HarmonicCapExceeded, Polynomial, ZonalHarmonic, evaluate,
                                     harm_dim, harmonic_basis, harmonic_project, laplacian,
                                     monomials, polynomial_sum, random_harmonic,
                                     zonal_gram_determinant)
from shellstrength.lattices import enumerate_shell
from shellstrength.linalg import rank
from shellstrength.theta import p4_polynomial

from oracles import sympy_laplacian


def to_sympy(P: Polynomial):
    xs = sympy.symbols(f"x0:{P.dim}")
    expr = sum(sympy.Rational(c.numerator, c.denominator) * sympy.prod([x ** e for x, e in zip(xs, k)])
               for k, c in P.terms.items())
    return sympy.expand(expr), xs


polys = st.integers(2, 4).flatmap(
    lambda d: st.integers(2, 5).flatmap(
        lambda l: st.dictionaries(st.sampled_from(monomials(d, l)), st.integers(-5, 5).filter(bool),
                                  min_size=1, max_size=5).map(lambda t: Polynomial(d, l, t))))


@settings(max_examples=40, deadline=None)
@given(polys)
def test_laplacian_matches_sympy(P):
    expr, xs = to_sympy(P)
    ours, _ = to_sympy(laplacian(P)) if not laplacian(P).is_zero() else (0, xs)
    assert sympy.expand(ours - sympy_laplacian(expr, xs)) == 0


def test_laplacian_examples():
    x2 = Polynomial.monomial((2, 0))
    y2 = Polynomial.monomial((0, 2))
    assert laplacian(x2 - y2).is_zero()
    assert laplacian(x2) == Polynomial(2, 0, {(0, 0): 2})
    assert laplacian(p4_polynomial(8)).is_zero()


def test_harm_dim_examples():
    assert all(harm_dim(2, l) == 2 for l in range(1, 12))
    assert harm_dim(4, 2) == 9
    assert harm_dim(8, 4) == 294
    assert harm_dim(8, 10) == 13013


@pytest.mark.parametrize("d", [2, 3, 4, 5, 6])
def test_basis_size_equals_harm_dim(d):
    for l in range(0, 9):
        B = harmonic_basis(d, l)
        assert len(B) == harm_dim(d, l) == B.certified_dim
        assert all(laplacian(P).is_zero() for P in B)


def test_basis_d2_degree3_spans_classical_pair():
    B = list(harmonic_basis(2, 3))
    a = Polynomial(2, 3, {(3, 0): 1, (1, 2): -3})
    b = Polynomial(2, 3, {(2, 1): 3, (0, 3): -1})
    vecs = [P.coefficient_vector() for P in B]
    assert rank(vecs) == 2
    assert rank(vecs + [a.coefficient_vector(), b.coefficient_vector()]) == 2


def test_basis_cap():
    with pytest.raises(HarmonicCapExceeded):
        harmonic_basis(8, 10)


def test_projection_examples():
    r2 = Polynomial.radial(4, 1)
    assert harmonic_project(r2).is_zero()
    x4 = Polynomial.monomial((4, 0, 0, 0))
    h = harmonic_project(x4)
    assert not h.is_zero() and laplacian(h).is_zero()
    P = p4_polynomial(8)
    assert harmonic_project(P) == P


@settings(max_examples=25, deadline=None)
@given(polys)
def test_projection_is_idempotent_and_harmonic(P):
    h = harmonic_project(P)
    assert laplacian(h).is_zero()
    assert harmonic_project(h) == h
    # P - h lies in r^2 * (polynomials), so it is orthogonal to harmonics: project(P - h) = 0
    assert harmonic_project(P - h).is_zero()


def test_random_harmonic_deterministic_and_harmonic():
    a = random_harmonic(4, 6, seed=5)
    assert a == random_harmonic(4, 6, seed=5)
    assert laplacian(a).is_zero() and not a.is_zero()


def test_random_harmonic_pairs_are_independent():
    independent = sum(rank([random_harmonic(4, 6, s).coefficient_vector(),
                            random_harmonic(4, 6, s + 1000).coefficient_vector()]) == 2
                      for s in range(100))
    assert independent >= 99


def test_random_harmonic_on_d8_roots_has_bounded_denominator():
    P = random_harmonic(8, 4, seed=3)
    den = 1
    for c in P.terms.values():
        den = den * c.denominator // np.gcd(den, c.denominator)
    for x in enumerate_shell("D8", 2).points[:40]:
        assert (evaluate(P, x) * den).denominator == 1


def test_evaluate_examples():
    P4 = p4_polynomial(8)
    assert evaluate(P4, (1, 1, 0, 0, 0, 0, 0, 0)) == 8
    assert evaluate(Polynomial.monomial((2, 0, 0, 0)), (2, 0, 0, 0), scale_denom=2) == 1
    with pytest.raises(ValueError):
        evaluate(P4, (1, 1))


@pytest.mark.parametrize("name,two_m,l", [("D4", 6, 3), ("D6", 4, 5), ("E8", 4, 7), ("D8", 2, 1)])
def test_odd_degree_sums_vanish(name, two_m, l):
    shell = enumerate_shell(name, two_m)
    P = random_harmonic(shell.lattice.dim, l, seed=l)
    assert polynomial_sum(P, shell.points, shell.lattice.scale_denom) == 0


def test_signed_permutations_preserve_harmonicity():
    rng = np.random.default_rng(2)
    for s in range(20):
        P = random_harmonic(5, 4, seed=s)
        perm = list(rng.permutation(5))
        signs = list(rng.choice([-1, 1], size=5))
        assert laplacian(P.permute(perm, signs)).is_zero()


def test_polynomial_json_round_trip():
    P = random_harmonic(4, 4, seed=9)
    data = P.to_json()
    assert all(isinstance(t["num"], str) and isinstance(t["den"], str) for t in data)
    assert Polynomial.from_json(data) == P


@pytest.mark.parametrize("d,l", [(2, 4), (3, 5), (4, 6), (8, 4)])
def test_zonal_expansion_is_harmonic_and_matches_values(d, l):
    y = tuple(range(1, d + 1))
    Z = ZonalHarmonic(d, l, y)
    P = Z.to_polynomial()
    assert laplacian(P).is_zero()
    rng = np.random.default_rng(d * l)
    for _ in range(5):
        x = tuple(int(v) for v in rng.integers(-3, 4, size=d))
        t = sum(a * b for a, b in zip(x, y))
        assert P(x) == Z.value(t, sum(v * v for v in x), sum(v * v for v in y))


def test_zonal_gram_determinant_detects_dependence():
    assert zonal_gram_determinant([(1, 0), (2, 1)], 4) != 0
    # in the plane the degree-4 zonals about e1 and e2 are both cos(4 theta)
    assert zonal_gram_determinant([(1, 0), (0, 1)], 4) == 0
    # y and -y give the same even-degree zonal
    assert zonal_gram_determinant([(1, 2), (-1, -2)], 4) == 0
