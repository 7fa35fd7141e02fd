from fractions import Fraction

import numpy as np
import pytest

from shellstrength.harmonics import Polynomial, ZonalHarmonic, harm_dim, harmonic_basis, random_harmonic
from shellstrength.lattices import get_lattice, shell_count_formula
from shellstrength.qseries import QSeries, eisenstein, eta_product, tau2
from shellstrength.tables import DIMENSION_ROWS
from shellstrength.theta import (default_coeff_depth, image_rank, p4_polynomial,
                                 polynomial_theta_table, verify_eta_identity, weighted_theta,
                                 zonal_coefficient_table)

ONE = {n: Polynomial.monomial((0,) * get_lattice(n).dim) for n in ("D4", "D8", "E8")}


def test_d8_p4_first_coefficient():
    th = weighted_theta("D8", p4_polynomial(8), 2)
    assert th.series[0] == 0
    assert th.series[1] == 896


def test_constant_weight_counts_points():
    th = weighted_theta("D4", ONE["D4"], 12)
    assert th.series[0] == 1
    assert [th.series[m] for m in range(1, 13)] == [shell_count_formula("D4", m) for m in range(1, 13)]


def test_harm2_vanishes_on_d4():
    for P in list(harmonic_basis(4, 2))[:4]:
        th = weighted_theta("D4", P, 20)
        assert all(c == 0 for c in th.series)


@pytest.mark.parametrize("name,l", [("D4", 3), ("D6", 5), ("E8", 7), ("E6", 9)])
def test_odd_degree_series_vanish(name, l):
    spec = get_lattice(name)
    Z = ZonalHarmonic(spec.dim, l, tuple(range(1, spec.dim + 1)))
    assert all(c == 0 for c in weighted_theta(name, Z, 12).series)


def test_linearity_on_random_pairs():
    rng = np.random.default_rng(0)
    for s in range(5):
        P, Q = random_harmonic(4, 6, s), random_harmonic(4, 6, s + 50)
        a, b = Fraction(int(rng.integers(-9, 10)), 7), Fraction(int(rng.integers(1, 9)))
        rows = polynomial_theta_table("D4", [P, Q, P.scale(a) + Q.scale(b)], 15)
        assert rows[2] == [a * x + b * y for x, y in zip(rows[0], rows[1])]


def test_zonal_routes_agree():
    spec = get_lattice("D6")
    axes = [(1, 2, 0, -1, 1, 3), (0, 1, 1, 1, 0, 2)]
    a = zonal_coefficient_table(spec, axes, [4, 6, 8], 10, "profile")
    b = zonal_coefficient_table(spec, axes, [4, 6, 8], 10, "enumeration")
    assert a == b


def test_zonal_equals_expanded_polynomial():
    Z = ZonalHarmonic(8, 4, (1, 0, 2, 0, 0, 1, 0, 1))
    assert weighted_theta("E8", Z, 4).series == weighted_theta("E8", Z.to_polynomial(), 4).series


def test_gram_model_rejects_polynomials():
    with pytest.raises(ValueError):
        weighted_theta("E6", random_harmonic(6, 2, 0), 3)


def test_default_depth():
    assert default_coeff_depth("E8", 8) == 3
    assert default_coeff_depth("D4", 6) == 4
    assert default_coeff_depth("D6", 14) == 11
    assert default_coeff_depth("E6", 12) == 7


@pytest.mark.parametrize("name,l,expected", [("D4", 6, 1), ("D4", 10, 0), ("E8", 8, 1)])
def test_image_rank_examples(name, l, expected):
    rep = image_rank(name, l)
    assert rep.rank_lower_bound == expected and rep.stabilized


def test_image_rank_with_polynomial_family():
    rep = image_rank("D4", 6, family="polynomial")
    assert rep.rank_lower_bound == 1 and rep.stabilized
    assert rep.rank_lower_bound <= harm_dim(4, 6)


def test_rank_bounds_never_exceed_table():
    for name, row in DIMENSION_ROWS.items():
        for k, exp in enumerate(row[:4]):
            rep = image_rank(name, 2 * k + 2, seed=3)
            assert rep.rank_lower_bound <= exp


def test_rank_invariant_under_signed_permutations():
    rng = np.random.default_rng(4)
    polys = [random_harmonic(4, 12, s) for s in range(6)]
    base = polynomial_theta_table("D4", polys, 10)
    from shellstrength.linalg import rank
    r0 = rank([row[1:] for row in base])
    for _ in range(3):
        perm = list(rng.permutation(4))
        signs = list(rng.choice([-1, 1], size=4))
        moved = polynomial_theta_table("D4", [P.permute(perm, signs) for P in polys], 10)
        assert rank([row[1:] for row in moved]) == r0 == 2


def test_eta_identities():
    assert verify_eta_identity("D8", p4_polynomial(8), eta_product({1: 8, 2: 8}, 12), 896, 10)
    assert verify_eta_identity("E8", ONE["E8"], eisenstein(4, 1, 30), 1, 25)
    formula = QSeries(0, tuple([1] + [shell_count_formula("D4", m) for m in range(1, 201)]))
    assert verify_eta_identity("D4", ONE["D4"], formula, 1, 200)


def test_eta_identity_reports_first_mismatch():
    res = verify_eta_identity("D8", p4_polynomial(8), eta_product({1: 8, 2: 8}, 12), 895, 4)
    assert not res and res.first_mismatch == (1, 896, 895)
    with pytest.raises(ValueError):
        verify_eta_identity("D8", p4_polynomial(8), eta_product({1: 8, 2: 8}, 3), 896, 10)


def test_d4_degree6_theta_is_multiple_of_tau2():
    rep = image_rank("D4", 6)
    Z = rep.spanning_weights()[0]
    th = weighted_theta("D4", Z, 60)
    t2 = tau2(60)
    c = th.series[1]
    assert c != 0 and all(th.series[m] == c * t2[m] for m in range(1, 61))


def test_report_json():
    import json
    rep = image_rank("E6", 8)
    data = json.loads(rep.dumps())
    assert data["rank_lower_bound"] == 1 and data["stabilized"] and len(data["spanning"]) == 1
