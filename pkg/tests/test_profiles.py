from fractions import Fraction

import numpy as np
import pytest

from shellstrength.lattices import E6_CARTAN, enumerate_shell, get_lattice
from shellstrength.profiles import (E6_GLUE_GRAM, e6_cartan_to_glue, inner_product_profile,
                                    supports_profile)
from shellstrength.lattices import UnsupportedLattice


def enumerated_profile(name, y, two_m):
    spec = get_lattice(name)
    pts = enumerate_shell(name, two_m).points
    vals, cnts = np.unique(spec.inner(pts, y), return_counts=True)
    return {Fraction(int(v), spec.scale_denom): int(c) for v, c in zip(vals, cnts)}


def profile_row(prof, two_m):
    vals, cnts = prof.rows.get(two_m, (np.zeros(0, np.int64), np.zeros(0, np.int64)))
    return {Fraction(int(v), prof.t_denom): int(c) for v, c in zip(vals, cnts)}


@pytest.mark.parametrize("name,y,top", [
    ("Z2", (2, -1), 30), ("D4", (1, 2, 0, -1), 24), ("D6", (3, 0, 1, -1, 2, 1), 14),
    ("D8", (1, 1, 0, 2, 0, -1, 0, 3), 8), ("E8", (1, 2, 0, 0, -1, 3, 1, 1), 6),
    ("E6", (1, 0, 0, 0, 0, 0), 10), ("E6", (2, -1, 1, 0, 3, -2), 10),
])
def test_profile_equals_enumeration(name, y, top):
    prof = inner_product_profile(name, y, top)
    for two_m in range(1, top + 1):
        assert profile_row(prof, two_m) == enumerated_profile(name, y, two_m), two_m


def test_e6_isometry_maps_cartan_to_glue_model():
    S = np.array(e6_cartan_to_glue(), dtype=np.int64)
    G = np.array(E6_GLUE_GRAM, dtype=np.int64)
    assert np.array_equal(S.T @ G @ S, 9 * np.array(E6_CARTAN))


def test_support_and_errors():
    assert supports_profile("D4") and supports_profile("E6") and not supports_profile("A2")
    with pytest.raises(UnsupportedLattice):
        inner_product_profile("A2", (1, 0), 4)
    with pytest.raises(ValueError):
        inner_product_profile("D4", (0, 0, 0, 0), 4)
    with pytest.raises(ValueError):
        inner_product_profile("D4", (1, 0, 0), 4)


def test_profile_sizes_follow_theta_of_e8():
    from shellstrength.qseries import divisor_sums
    prof = inner_product_profile("E8", (1, 0, 0, 0, 0, 0, 0, 0), 120)
    s3 = divisor_sums(3, 60)
    assert all(prof.size(2 * m) == 240 * s3[m] for m in range(1, 61))
