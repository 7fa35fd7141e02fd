import json
import subprocess
import sys

import pytest

from shellstrength.cli import EXIT_MISMATCH, EXIT_OK, EXIT_USAGE, main, parse_range, UsageError


def run(tmp_path, *argv, name="out"):
    out = tmp_path / name
    code = main(list(argv) + ["--out", str(out)])
    return code, (out.read_text() if out.exists() else None)


def test_shells_d4_root_shell(tmp_path):
    code, text = run(tmp_path, "shells", "--lattice", "D4", "--two-m", "2")
    assert code == EXIT_OK
    rows = [l for l in text.splitlines() if l and not l.startswith("#")]
    assert rows[0] == "x1,x2,x3,x4" and len(rows[1:]) == 24


def test_outputs_are_byte_identical(tmp_path):
    for argv in (["strength", "--lattice", "E8", "--m", "1..12", "--max-degree", "32"],
                 ["theta", "--lattice", "D8", "--p4", "--m-max", "6"],
                 ["congruence", "--p-max", "200"]):
        a = run(tmp_path, *argv, name="a")
        b = run(tmp_path, *argv, name="b")
        assert a == b and a[0] == EXIT_OK


def test_strength_rows(tmp_path):
    code, text = run(tmp_path, "strength", "--lattice", "E8", "--m", "1..20", "--max-degree", "32")
    assert code == EXIT_OK
    recs = [json.loads(l) for l in text.splitlines()]
    assert len(recs) == 20 and all(r["members"] == [2, 4, 6, 10] for r in recs)


def test_theta_p4_and_image_rank(tmp_path):
    code, text = run(tmp_path, "theta", "--lattice", "D8", "--p4", "--m-max", "3")
    assert code == EXIT_OK
    assert json.loads(text)["series"]["coeffs"][:4] == ["0", "896", "-7168", "10752"]
    code, text = run(tmp_path, "theta", "--lattice", "D4", "--image-rank", "--degree", "12")
    assert code == EXIT_OK and json.loads(text)["rank_lower_bound"] == 2


def test_scan_criteria(tmp_path):
    code, text = run(tmp_path, "scan", "--criterion", "tau2", "--m-max", "2000")
    assert code == EXIT_OK and json.loads(text)["zero_positions"] == []
    code, text = run(tmp_path, "scan", "--criterion", "bw16", "--m-max", "300")
    assert code == EXIT_OK
    code, text = run(tmp_path, "scan", "--criterion", "z2", "--m-max", "30")
    assert code == EXIT_OK and json.loads(text)["mismatches"] == []


def test_design_command(tmp_path):
    pts = tmp_path / "d4.csv"
    assert main(["shells", "--lattice", "D4", "--two-m", "2", "--out", str(pts)]) == EXIT_OK
    code, text = run(tmp_path, "design", "--points", str(pts))
    out = json.loads(text)
    assert code == EXIT_OK and out["members"] == [1, 2, 3, 4, 5, 7, 9, 10]
    assert out["half_set"] == {"points": 12, "inner_products": ["-1/2", "0", "1/2"]}


def test_tables_command(tmp_path, capsys):
    assert main(["tables", "--out-dir", str(tmp_path)]) == EXIT_OK
    dims = (tmp_path / "dimension_table.csv").read_text().splitlines()
    assert "MISMATCH" not in "".join(dims)
    assert (tmp_path / "cardinality_table.csv").read_text().count("ok") == 45


def test_usage_errors(tmp_path):
    assert main(["shells", "--lattice", "E7", "--two-m", "2"]) == EXIT_USAGE
    assert main(["shells", "--lattice", "D4", "--two-m", "0"]) == EXIT_USAGE
    assert main(["strength", "--lattice", "D4", "--m", "5..2", "--max-degree", "4"]) == EXIT_USAGE
    assert main(["theta", "--lattice", "D4", "--image-rank"]) == EXIT_USAGE
    assert main(["nonsense"]) == EXIT_USAGE
    assert main(["scan", "--criterion", "tau2", "--m-max", "10", "--threads", "0"]) == EXIT_USAGE
    with pytest.raises(UsageError):
        parse_range("a..b")
    assert parse_range("7") == (7, 7) and parse_range("1..1000") == (1, 1000)


def test_mismatch_exit_code(tmp_path, monkeypatch):
    from shellstrength import tables
    monkeypatch.setitem(tables.STRENGTH_ROWS, "E8", (32, frozenset({2, 4})))
    code, _ = run(tmp_path, "strength", "--lattice", "E8", "--m", "1..3", "--max-degree", "32")
    assert code == EXIT_MISMATCH


def test_console_script_entry_point():
    r = subprocess.run([sys.executable, "-m", "shellstrength.cli", "congruence", "--p-max", "50"],
                       capture_output=True, text=True)
    assert r.returncode == 0 and json.loads(r.stdout)["failures"] == []
