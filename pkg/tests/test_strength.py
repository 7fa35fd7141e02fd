import json
from fractions import Fraction

import numpy as np
import pytest

from shellstrength import strength
from shellstrength.harmonics import harmonic_basis, polynomial_sums
from shellstrength.lattices import apply_signed_permutation, enumerate_shell, get_lattice
from shellstrength.qseries import tau2
from shellstrength.strength import (INCONCLUSIVE, StrengthReport, appendix_strength_scan,
                                    congruence_certificate, convolution_criteria,
                                    dual_route_disagreements, e8_corollary_check,
                                    prime_nonvanishing_region, replay_witness, strength_upto,
                                    tau2_nonvanishing_scan, theorem1_check, two_dim_strength_check)
from shellstrength.tables import STRENGTH_ROWS


@pytest.mark.parametrize("name,L,expected", [
    ("D4", 22, {2, 4, 10}), ("E8", 10, {2, 4, 6, 10}), ("Z2", 8, {2, 6}), ("A2", 8, {2, 4, 8}),
    ("D6", 14, {2}), ("E6", 10, {2, 4}), ("D8", 12, {2}),
])
def test_strength_at_first_shell(name, L, expected):
    rep = strength_upto(name, 1, L)
    assert rep.member_degrees == expected
    assert not rep.inconclusive_degrees


def test_z2_degree4_hand_sum():
    rep = strength_upto("Z2", 1, 4)
    assert 4 not in rep.member_degrees
    assert Fraction(rep.witnesses[4]["value"]) != 0
    pts = enumerate_shell("Z2", 1).points
    assert sum(int(x) ** 4 - 6 * int(x) ** 2 * int(y) ** 2 + int(y) ** 4 for x, y in pts) == 4


def test_empty_shell_raises():
    with pytest.raises(ValueError):
        strength_upto("Z2", 3, 4)


def test_witnesses_replay():
    for name, m, L in [("D4", 3, 12), ("E6", 2, 8), ("A2", 7, 8), ("Z2", 5, 8)]:
        rep = strength_upto(name, m, L)
        for l, w in rep.witnesses.items():
            assert replay_witness(name, m, l, w) == Fraction(w["value"]) != 0
            assert l not in rep.member_degrees


def test_report_json_round_trip():
    rep = strength_upto("D4", 2, 12)
    again = StrengthReport.from_json(rep.dumps())
    assert again == rep
    assert json.loads(rep.dumps())["members"] == [2, 4, 10]


def test_small_scans_match_table_and_routes_agree():
    for name, m_max in [("D4", 60), ("D8", 30), ("E8", 30), ("D6", 20), ("E6", 20)]:
        L, expected = STRENGTH_ROWS[name]
        reps = appendix_strength_scan(name, m_max, L)
        assert reps and all(r.member_degrees == expected for r in reps), name
    assert dual_route_disagreements("D4", 22, 80) == []
    assert dual_route_disagreements("D8", 12, 30) == []


def test_lifted_and_direct_verdicts_agree():
    for m in (1, 2, 5, 12):
        a = strength_upto("D4", m, 22, "lifted")
        b = strength_upto("D4", m, 22, "direct")
        assert a.verdicts == b.verdicts and a.witnesses == b.witnesses


def test_scan_checkpoint_resume(tmp_path):
    ck = tmp_path / "d4.jsonl"
    first = appendix_strength_scan("D4", 150, 12, checkpoint=ck)
    lines = ck.read_text().splitlines()
    assert len(lines) == 150
    # drop the tail and resume
    ck.write_text("\n".join(lines[:100]) + "\n")
    again = appendix_strength_scan("D4", 150, 12, checkpoint=ck)
    assert [r.dumps() for r in again] == [r.dumps() for r in first]
    assert len(ck.read_text().splitlines()) == 150


def test_unstabilized_rank_gives_inconclusive(monkeypatch):
    real = strength.spanning_report.__wrapped__

    def fake(lattice, degree):
        rep = real(lattice, degree)
        if degree == 10:
            rep.stabilized = False
        return rep

    monkeypatch.setattr(strength, "spanning_report", fake)
    rep = strength_upto("D4", 1, 12)
    assert rep.verdicts[10] == INCONCLUSIVE
    assert 10 not in rep.member_degrees
    assert rep.verdicts[6] == "excluded"


def test_strength_invariant_under_signed_permutations():
    rng = np.random.default_rng(5)
    for m in (1, 3, 6):
        pts = enumerate_shell("D4", 2 * m).points
        for l in (4, 6, 8):
            basis = list(harmonic_basis(4, l))
            base = all(s == 0 for s in polynomial_sums(basis, pts))
            perm, signs = list(rng.permutation(4)), list(rng.choice([-1, 1], size=4))
            moved = apply_signed_permutation(pts, perm, signs)
            assert all(s == 0 for s in polynomial_sums(basis, moved)) == base
            assert base == (l in strength_upto("D4", m, l).member_degrees)


def test_d4_degree6_equivalence_small():
    rows = theorem1_check(40)
    assert all(r.consistent and not r.degree_in_strength for r in rows)
    assert rows[0].coefficient == 1 and rows[1].coefficient == -8


def test_e8_degree8_equivalence_small():
    rows = e8_corollary_check(12)
    assert all(r.consistent and not r.degree_in_strength for r in rows)
    assert [r.coefficient for r in rows[:2]] == [1, -24]


def test_congruence_examples():
    rows = {r.p: r for r in congruence_certificate(50)}
    assert rows[3].tau2 == 12 and rows[5].tau2 == -210 and rows[7].tau2 == 1016
    assert all(r.mod3_ok and r.mod5_ok for r in rows.values())
    assert all(rows[p].d8_ok for p in (3, 5, 7))
    assert 2 not in rows
    with pytest.raises(ValueError):
        congruence_certificate(2)


def test_prime_region():
    v = {r.p: r for r in prime_nonvanishing_region(100)}
    assert v[7].certified and v[7].tau2 == 1016
    assert not v[29].certified and v[29].nonzero
    assert 2 not in v and 3 not in v
    assert all(r.nonzero for r in v.values() if r.certified)


def test_convolution_examples():
    leech, bw = convolution_criteria(200)
    assert leech.clean and bw.clean
    first = dict((m, int(v)) for m, v in leech.details["first"])
    assert first[2] == 1 and first[3] == -48
    assert dict((m, int(v)) for m, v in bw.details["first"])[4] == 88


def test_two_dim_small():
    for name in ("Z2", "A2"):
        rows = two_dim_strength_check(name, 60, 20)
        assert rows and all(r.ok for r in rows)


def test_tau2_scan_small_and_resume(tmp_path):
    ck = tmp_path / "tau2.json"
    res = tau2_nonvanishing_scan(5000, checkpoint=ck)
    assert res.clean and ck.exists()
    again = tau2_nonvanishing_scan(5000, checkpoint=ck)
    assert again.zero_positions == res.zero_positions == []
    t = tau2(5000)
    assert all(t[m] != 0 for m in range(1, 5001))
