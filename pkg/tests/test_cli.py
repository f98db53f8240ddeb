import csv
import io
import json
import subprocess
import sys
from decimal import Decimal
from fractions import Fraction
from pathlib import Path

import pytest

from derange.cli import InvalidParameters, RunConfig, main
from derange.verify import default_fixture_path

GOLDEN = Path(__file__).parent / "data" / "ratio_r3_m10.csv"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def value_of(plain: str) -> str:
    return dict(line.split(None, 1) for line in plain.splitlines())["value"].strip()


@pytest.mark.parametrize("argv,expected", [
    (["exact", "--family", "derangement", "--n", "4"], "9"),
    (["exact", "--family", "bpm-minus-m", "--r", "4", "--m", "1"], "686"),
    (["exact", "--family", "tripartite", "--m", "1"], "8"),
    (["exact", "--family", "deranged-matching", "--n", "3"], "8"),
    (["exact", "--family", "multipartite-minus-m", "--r", "4", "--c", "3"], "1724"),
])
def test_exact_examples(capsys, argv, expected):
    code, out, _ = run(capsys, *argv)
    assert code == 0
    assert value_of(out) == expected


def test_exact_json(capsys):
    code, out, _ = run(capsys, "exact", "--family", "tripartite-minus-m", "--m", "2", "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert data["value"] == "825"
    assert data["method"]


def test_exact_method_choice(capsys):
    for method in ("closed_form", "recurrence", "oracle"):
        code, out, _ = run(capsys, "exact", "--family", "derangement", "--n", "6", "--method", method)
        assert code == 0 and value_of(out) == "265"


def test_exact_invalid_params(capsys):
    code, _, err = run(capsys, "exact", "--family", "bpm", "--r", "4", "--m", "0")
    assert code == 2
    assert "error" in err
    code, _, err = run(capsys, "exact", "--family", "multipartite-minus-m", "--r", "4", "--c", "3", "--method",
                       "pie_sum")
    assert code == 2
    code, _, err = run(capsys, "exact", "--family", "tripartite")
    assert code == 2 and "--m" in err


def test_exact_custom_graph(capsys, tmp_path):
    path = tmp_path / "c6.txt"
    path.write_text("# hexagon\nvertices 6\n0 1\n1 2\n2 3\n3 4\n4 5\n5 0\n")
    code, out, _ = run(capsys, "exact", "--family", "custom", "--graph", str(path))
    assert code == 0 and value_of(out) == "2"
    code, _, _ = run(capsys, "exact", "--family", "custom", "--graph", str(tmp_path / "missing.txt"))
    assert code == 2


def test_ratio_r3_csv(capsys):
    code, out, _ = run(capsys, "ratio", "--regime", "r3", "--m-max", "5", "--format", "csv")
    assert code == 0
    lines = out.splitlines()
    assert len(lines) == 6
    assert lines[0].split(",")[-1] == "abs_error"
    assert lines[1].startswith("r3_tripartite,3,2,1,3,,4,8,")


def test_ratio_hatcheck_json(capsys):
    code, out, _ = run(capsys, "ratio", "--regime", "hatcheck", "--n-max", "3", "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert [Fraction(int(d["numerator"]), int(d["denominator"])) for d in data] == [0, Fraction(1, 2),
                                                                                     Fraction(1, 3)]


def test_ratio_regular_d0(capsys):
    code, out, _ = run(capsys, "ratio", "--regime", "regular", "--d", "0", "--n-max", "3", "--format", "csv")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 3
    assert all(Decimal(r["ratio"]) == 1 and r["numerator"] == r["denominator"] for r in rows)


def test_ratio_plain(capsys):
    code, out, _ = run(capsys, "ratio", "--regime", "kindergartner", "--n-max", "4")
    assert code == 0
    assert out.splitlines()[0].split()[0] == "regime"
    assert len(out.splitlines()) == 5


def test_ratio_constant_filters_divisors(capsys):
    code, out, _ = run(capsys, "ratio", "--regime", "constant", "--c", "3", "--n-max", "9", "--format", "csv")
    assert code == 0
    ns = [int(r["n"]) for r in csv.DictReader(io.StringIO(out))]
    assert ns == [3, 6, 9]


def test_ratio_budget_exit_code(capsys):
    code, _, err = run(capsys, "ratio", "--regime", "bpm", "--r", "5", "--m-max", "3", "--term-budget", "10000")
    assert code == 3
    assert "budget" in err


def test_budget_env_and_flag(capsys, monkeypatch):
    monkeypatch.setenv("DERANGE_TERM_BUDGET", "10000")
    code, _, _ = run(capsys, "exact", "--family", "bpm-minus-m", "--r", "5", "--m", "3")
    assert code == 3
    code, out, _ = run(capsys, "exact", "--family", "bpm-minus-m", "--r", "5", "--m", "3", "--term-budget",
                       str(2 * 10**6))
    assert code == 0
    monkeypatch.setenv("DERANGE_TERM_BUDGET", "lots")
    code, _, _ = run(capsys, "exact", "--family", "derangement", "--n", "3")
    assert code == 2


def test_run_config_validation():
    with pytest.raises(InvalidParameters):
        RunConfig("exact", precision=10)
    with pytest.raises(InvalidParameters):
        RunConfig("exact", term_budget=100)
    with pytest.raises(InvalidParameters):
        RunConfig("exact", jobs=0)


def test_precision_flag_rejected(capsys):
    code, _, _ = run(capsys, "series", "--r", "3", "--precision", "10")
    assert code == 2


@pytest.mark.parametrize("r", [3, 6])
def test_series_terms_30(capsys, r):
    code, out, _ = run(capsys, "series", "--r", str(r), "--terms", "30", "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert Decimal(data["actual_error"]) < Decimal("1e-12")
    assert Decimal(data["tail_bound"]) >= Decimal(data["actual_error"])
    assert data["bound_holds"] == "true"


def test_series_value_one(capsys):
    code, out, _ = run(capsys, "series", "--r", "2", "--terms", "0")
    assert code == 0 and value_of(out) == "1"


def test_series_bad_r(capsys):
    code, _, _ = run(capsys, "series", "--r", "1")
    assert code == 2


def test_bounds_command(capsys, tmp_path):
    path = tmp_path / "k4.txt"
    path.write_text("vertices 4\n0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n")
    code, out, _ = run(capsys, "bounds", "--graph", str(path), "--d", "3", "--format", "json")
    assert code == 0
    assert json.loads(out)["ok"] is True
    code, _, _ = run(capsys, "bounds", "--graph", str(path), "--d", "2")
    assert code == 2


def test_output_file(capsys, tmp_path):
    target = tmp_path / "table.csv"
    code, out, _ = run(capsys, "ratio", "--regime", "r3", "--m-max", "10", "--format", "csv", "--output",
                       str(target))
    assert code == 0 and out == ""
    assert target.read_bytes() == GOLDEN.read_bytes()


def test_verify_fast(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "fast")
    assert code == 0
    lines = out.splitlines()
    assert lines and all(line.startswith("PASS") for line in lines)


def test_verify_corrupted_fixture(capsys, tmp_path):
    data = json.loads(default_fixture_path().read_text())
    data["counts"][0]["value"] = "12345"
    bad = tmp_path / "fixtures.json"
    bad.write_text(json.dumps(data))
    code, out, _ = run(capsys, "verify", "--fixtures", str(bad))
    assert code == 1
    failing = [line for line in out.splitlines() if line.startswith("FAIL")]
    assert len(failing) == 1
    assert data["counts"][0]["name"] in failing[0]


def test_verify_unreadable_fixture(capsys, tmp_path):
    bad = tmp_path / "fixtures.json"
    bad.write_text("{not json")
    code, out, _ = run(capsys, "verify", "--fixtures", str(bad))
    assert code == 1
    assert any(line.startswith("FAIL") and "fixtures-load" in line for line in out.splitlines())


def test_deterministic_subprocess():
    argv = [sys.executable, "-m", "derange.cli", "ratio", "--regime", "r3", "--m-max", "10", "--format", "csv"]
    first = subprocess.run(argv, capture_output=True, check=True).stdout
    second = subprocess.run(argv, capture_output=True, check=True).stdout
    assert first == second == GOLDEN.read_bytes()
